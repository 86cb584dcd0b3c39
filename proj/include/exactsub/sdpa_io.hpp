#pragma once

#include <iosfwd>

#include "exactsub/model.hpp"

namespace exactsub {

/// Sparse SDPA (.dat-s) export. The problem maps onto SDPA's dual form
///   max F0 . Y  s.t.  Fi . Y = c_i,  Y >= 0
/// with F0 the objective, Fi the constraint matrices and c the right-hand
/// sides. Nonneg blocks are written with negative block sizes. Entries use
/// 1-based "matno blkno i j value" lines for the upper triangle.
void write_sdpa(std::ostream& out, const SdpProblem& problem);

/// Reads the sparse SDPA format written by write_sdpa (comment lines starting
/// with '"' or '*', optional braces, commas and parentheses are tolerated).
/// The result has formulation `generic`. Throws std::runtime_error on
/// malformed input.
SdpProblem read_sdpa(std::istream& in);

}  // namespace exactsub
