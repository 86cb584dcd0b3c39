#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "exactsub/facets.hpp"
#include "exactsub/graph.hpp"

namespace exactsub {

enum class BlockKind { psd, nonneg };

struct BlockSpec {
  BlockKind kind = BlockKind::psd;
  int dim = 0;
};

/// Coefficient `value` at (row, col), row <= col, of one block. In a PSD
/// block an off-diagonal entry stands for both (row, col) and (col, row), so
/// it contributes 2 * value * X(row, col) to the trace inner product (the
/// SDPA convention). Nonneg blocks only use row == col.
struct SparseEntry {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// sum over entries of <A, X> == rhs.
struct LinearConstraint {
  std::vector<SparseEntry> entries;
  double rhs = 0.0;
};

enum class BaseFormulation { theta_nplus1, theta_n, generic };

enum class EscMode { lambda, facets };

/// The set J of subsets whose (scaled) exact subgraph constraints are added.
struct EscSelection {
  std::vector<VertexSubset> subsets;
  EscMode mode = EscMode::lambda;
  /// Use SSTAB^2 (scaled stable set matrices plus zero); lambda mode only.
  bool scaled = false;
};

/// Where the variables and rows of one exact subgraph constraint live.
struct EscRecord {
  VertexSubset subset;
  EscMode mode = EscMode::lambda;
  bool scaled = false;
  /// Range in the nonneg block: convex weights (lambda mode) or slacks.
  int first_variable = 0;
  int variable_count = 0;
  int first_constraint = 0;
  int constraint_count = 0;
  /// Lambda mode: generator masks over local indices 0..k-1, empty set first.
  std::vector<std::uint64_t> stable_sets;
  /// Facet mode: the inequality behind each slack, in local indices.
  std::vector<LinearInequality> inequalities;
};

/// Block-structured conic program in equality form:
///   maximize <C, X>  subject to  <A_i, X> = b_i,  X_psd >= 0,  X_nonneg >= 0.
struct SdpProblem {
  std::vector<BlockSpec> blocks;
  std::vector<SparseEntry> objective;
  std::vector<LinearConstraint> constraints;

  BaseFormulation formulation = BaseFormulation::generic;
  int vertex_count = 0;
  /// Block holding the vertex matrix X, and the row/column where vertex 0
  /// starts inside it (1 when the corner row of the lifted matrix precedes).
  int matrix_block = 0;
  int vertex_offset = 0;
  int nonneg_block = -1;
  std::vector<EscRecord> escs;

  /// Appends `count` variables to the shared nonneg block (creating it on
  /// first use) and returns the index of the first one.
  int add_nonneg(int count);
  /// Throws std::invalid_argument when an entry addresses a missing block,
  /// lies outside its block, or puts an off-diagonal entry in a nonneg block.
  void validate() const;
};

/// Value of one block: `matrix` for PSD blocks, `values` for nonneg blocks.
struct BlockValue {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd values;
};

/// One PSD block of order n+1 with the corner pinned to 1, the first row
/// carrying x, diag(X) = x, and X_ij = 0 on edges; objective 1^T x.
SdpProblem build_theta_nplus1(const Graph& g);

/// One PSD block of order n with trace 1 and X_ij = 0 on edges; objective
/// <J, X> with J the all-ones matrix.
SdpProblem build_theta_n(const Graph& g);

/// Returns `problem` with an (S)ESC for every subset of `sel`. Duplicate
/// subsets are added once and the empty subset adds nothing.
SdpProblem add_escs(SdpProblem problem, const Graph& g, const EscSelection& sel);

/// All subsets of {0..n-1} of order k in lexicographic order; throws
/// ResourceLimitError when C(n, k) exceeds `cap`.
std::vector<VertexSubset> all_subsets(int n, int k, std::size_t cap = 200'000);

double evaluate_objective(const SdpProblem& problem, std::span<const BlockValue> point);
double evaluate_constraint(const LinearConstraint& c, std::span<const BlockValue> point);

/// The n x n vertex matrix X (without the corner row of the lifted form).
Eigen::MatrixXd vertex_matrix(const SdpProblem& problem, std::span<const BlockValue> point);
/// x: the first row of the lifted form, or diag(X) for the order-n form.
Eigen::VectorXd vertex_vector(const SdpProblem& problem, std::span<const BlockValue> point);
/// Convex weights (lambda mode) or slacks (facet mode) of ESC `index`.
Eigen::VectorXd esc_variables(const SdpProblem& problem, std::span<const BlockValue> point,
                              std::size_t index);

/// X / trace(X): maps a feasible (x, X) of the lifted form to a feasible
/// point of the order-n form. Throws std::invalid_argument when the trace is
/// not positive or diag(X) departs from x by more than `tol`.
Eigen::MatrixXd gruber_rendl_down(const Eigen::VectorXd& x, const Eigen::MatrixXd& X,
                                  double tol = 1e-5);

/// X* = <J, X> X and x* = diag(X*). Throws std::invalid_argument when X
/// violates the trace or edge constraints of `g` by more than `tol`.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> gruber_rendl_up(const Graph& g, const Eigen::MatrixXd& X,
                                                            double tol = 1e-5);

}  // namespace exactsub
