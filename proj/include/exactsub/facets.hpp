#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace exactsub {

/// Coefficient on the matrix entry X(row, col), row <= col.
struct Term {
  int row = 0;
  int col = 0;
  std::int64_t coeff = 0;
  auto operator<=>(const Term&) const = default;
};

/// sum_t coeff_t * X(row_t, col_t) <= rhs over symmetric matrices.
///
/// Terms address entries of the upper triangle, so an off-diagonal term
/// c * X(i,j) corresponds to the symmetric coefficient matrix A with
/// A(i,j) = A(j,i) = c/2 in the trace form <A, X> <= rhs.
struct LinearInequality {
  std::vector<Term> terms;
  std::int64_t rhs = 0;

  double lhs(const Eigen::MatrixXd& X) const;
  /// max(0, lhs - rhs).
  double violation(const Eigen::MatrixXd& X) const { return std::max(0.0, lhs(X) - static_cast<double>(rhs)); }
  bool satisfied(const Eigen::MatrixXd& X, double tol = 1e-9) const { return lhs(X) <= static_cast<double>(rhs) + tol; }
  Eigen::MatrixXd coefficient_matrix(int k) const;

  /// Sorts terms, merges repeats, drops zeros and divides by the gcd of all
  /// coefficients and the right-hand side. Only positive scaling is applied;
  /// the sense of the inequality is never flipped.
  void canonicalize();
  /// Maps local index a to map[a] (terms are re-oriented to row <= col).
  LinearInequality relabeled(std::span<const int> map) const;

  auto operator<=>(const LinearInequality&) const = default;
};

enum class FacetSource { enumerated, handcoded };

/// H-representation of STAB^2 of the edgeless graph on `order` vertices,
/// i.e. of conv{ s s^T : s in {0,1}^order }.
struct FacetSystem {
  int order = 0;
  std::vector<LinearInequality> inequalities;
  FacetSource source = FacetSource::enumerated;
};

/// Complete irredundant facet list via exact double description on the 2^k
/// vertices. k = 6 runs for a long time and requires `allow_long_running`.
FacetSystem facets_stab2_empty(int k, bool allow_long_running = false);

/// Memoized facets_stab2_empty for 2 <= k <= 5; thread-safe.
const FacetSystem& cached_facets_stab2_empty(int k);

/// 0 <= X_ij, X_ij <= X_ii, X_ij <= X_jj, X_ii + X_jj <= 1 + X_ij.
std::vector<LinearInequality> esc2_inequalities(int i, int j);

/// The three pair systems plus the three homogeneous triangle inequalities
/// and X_ii + X_jj + X_ll <= 1 + X_ij + X_il + X_jl (16 in total).
std::vector<LinearInequality> esc3_inequalities(int i, int j, int l);

FacetSystem handcoded_facets(int k);

/// Largest number of affinely independent vertices on which `ineq` is
/// tight. A facet of the full-dimensional polytope reaches k(k+1)/2.
int tight_vertex_rank(const LinearInequality& ineq, int k);

/// PORTA-style .ieq text. Coordinates x1..xd enumerate the upper triangle
/// row by row: X(1,1), X(1,2), ..., X(1,k), X(2,2), ..., X(k,k).
void write_ieq(std::ostream& out, const FacetSystem& system);

/// Index of X(row, col) (row <= col, 0-based) in the .ieq coordinate order.
int triangle_index(int row, int col, int k);

}  // namespace exactsub
