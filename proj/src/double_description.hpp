#pragma once

// Exact double description on integer data. Private to the library so GMP
// stays out of the public headers.

#include <vector>

#include <gmpxx.h>

namespace exactsub::detail {

using IntVector = std::vector<mpz_class>;

/// Extreme rays of the pointed cone { a : <row_i, a> >= 0 for every i }.
/// The rows must span the ambient space and there may be at most 64 of them.
/// Each ray is returned as a primitive integer vector.
std::vector<IntVector> cone_extreme_rays(const std::vector<IntVector>& rows);

/// Rank over the rationals.
int rational_rank(const std::vector<IntVector>& rows);

}  // namespace exactsub::detail
