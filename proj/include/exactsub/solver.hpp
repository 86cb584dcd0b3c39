#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "exactsub/model.hpp"

namespace exactsub {

struct SolverSettings {
  /// Relative duality gap at which an iterate counts as optimal.
  double tol_gap = 1e-7;
  /// Relative primal and dual residual norms at which an iterate is feasible.
  double tol_feas = 1e-7;
  int max_iter = 200;
  /// Fraction of the distance to the cone boundary taken per step.
  double step_frac = 0.98;
  /// Line-oriented iteration log (iter, mu, gap, primal_res, dual_res,
  /// step_p, step_d) when non-null.
  std::ostream* log = nullptr;
};

enum class SolveStatus { optimal, max_iter, infeasible_suspect, numerical_failure };

std::string to_string(SolveStatus status);

struct IterationRecord {
  int iter = 0;
  double mu = 0.0;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double step_primal = 0.0;
  double step_dual = 0.0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
};

/// Primal-dual pair in the maximization convention: the dual is
///   minimize b^T y  s.t.  Z = sum_i y_i A_i - C,  Z in the cone.
struct Solution {
  SolveStatus status = SolveStatus::numerical_failure;
  std::vector<BlockValue> primal;
  Eigen::VectorXd dual_y;
  std::vector<BlockValue> dual_slack;
  double objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  double seconds = 0.0;
  std::vector<IterationRecord> history;
  /// Rows dropped before solving because they repeat an earlier row exactly
  /// (up to scaling); their multipliers are reported as zero.
  std::vector<int> dropped_constraints;
};

/// Primal-dual path following with the HKM direction and Mehrotra's
/// predictor-corrector. The Schur complement is assembled densely and
/// factored by Cholesky. Deterministic for identical inputs.
Solution solve(const SdpProblem& problem, const SolverSettings& settings = {});

struct ResidualReport {
  double primal_max = 0.0;       ///< max_i |<A_i, X> - b_i|
  double primal_relative = 0.0;  ///< ||A(X) - b|| / (1 + ||b||)
  std::vector<int> violated;     ///< rows with |residual| > flag_tol (1 + |b_i|)
  int worst_constraint = -1;
  double primal_cone_min = 0.0;  ///< smallest eigenvalue / entry over the primal blocks
  double objective = 0.0;

  bool has_dual = false;
  double dual_relative = 0.0;    ///< ||sum y A - C - Z|| / (1 + ||C||)
  double dual_cone_min = 0.0;
  double dual_objective = 0.0;
  double complementarity = 0.0;  ///< <X, Z> / (total block dimension)
};

/// Recomputes residuals from scratch with long double accumulation,
/// independent of the solver's bookkeeping.
ResidualReport check_solution(const SdpProblem& problem, const Solution& solution, double flag_tol = 1e-6);
ResidualReport check_primal(const SdpProblem& problem, std::span<const BlockValue> point, double flag_tol = 1e-6);

void write_iteration_log(std::ostream& out, const IterationRecord& rec);

}  // namespace exactsub
