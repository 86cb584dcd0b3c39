#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exactsub/graph.hpp"
#include "exactsub/model.hpp"
#include "exactsub/solver.hpp"

namespace exactsub {

/// ESH: exact subgraph constraints on the lifted order-(n+1) model.
/// CESH: the same constraints on the trace-one order-n model.
/// SESH: scaled constraints on the order-n model.
enum class Formulation { esh, cesh, sesh };

std::string to_string(Formulation f);

struct RoundRecord {
  /// 0 is the solve without constraints; round r follows r separation passes.
  int round = 0;
  double bound = 0.0;
  /// Constraints added by the separation pass just before this solve.
  int escs_added = 0;
  int escs_total = 0;
  double solve_seconds = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::optimal;
};

struct BoundReport {
  Formulation formulation = Formulation::esh;
  std::string graph_name;
  int n = 0;
  int m = 0;
  EscSelection selection;
  double bound = 0.0;
  std::optional<int> alpha_lb;
  SolveStatus status = SolveStatus::optimal;
  int iterations = 0;
  double seconds = 0.0;
  std::vector<RoundRecord> trajectory;
  /// Set when a search round found no violated subgraph.
  bool stopped_early = false;

  /// Number of subsets in the selection per subset order.
  std::map<int, int> selection_sizes() const;
  /// floor(bound), tolerant to solver noise just above an integer.
  int floor_bound() const;
};

struct BoundOptions {
  SolverSettings solver;
  /// Fill alpha_lb by branch and bound when n <= this.
  int alpha_max_order = 70;
  std::uint64_t alpha_node_limit = 200'000'000;
};

struct Relaxation {
  SdpProblem problem;
  Solution solution;
};

/// Base model of `f` with the constraints of `sel` added; sel.scaled is
/// replaced by (f == sesh).
SdpProblem build_relaxation(const Graph& g, Formulation f, const EscSelection& sel);
Relaxation solve_relaxation(const Graph& g, Formulation f, const EscSelection& sel,
                            const SolverSettings& settings = {});

/// Brute-force alpha for graphs within the options' limits, else nullopt.
std::optional<int> reference_alpha(const Graph& g, const BoundOptions& opts = {});

/// Solves and reports; a failed solve keeps the best iterate's value and
/// its status.
BoundReport compute_bound(const Graph& g, Formulation f, const EscSelection& sel,
                          const BoundOptions& opts = {});

/// compute_bound with every order-k subset. Throws ResourceLimitError when
/// C(n, k) exceeds `cap`.
BoundReport compute_level(const Graph& g, Formulation f, int k, const BoundOptions& opts = {},
                          EscMode mode = EscMode::lambda, std::size_t cap = 200'000);

struct SearchConfig {
  int order = 3;
  int rounds = 10;
  int max_per_round = 200;
  /// Random candidates per round; 0 means 50 n.
  int candidate_budget = 0;
  double tol_viol = 1e-4;
  std::uint64_t seed = 1;
  EscMode mode = EscMode::lambda;
};

struct SearchResult {
  EscSelection selection;
  BoundReport report;
};

/// Violated-subgraph search. Each round solves the current model, scores
/// random subsets, greedy seeds around large diagonal entries and swap
/// neighbours of violated subsets by their distance to the (scaled) squared
/// stable set polytope, and adds the worst max_per_round of those above
/// tol_viol. A final solve follows the last round. Deterministic for a fixed
/// seed.
SearchResult cutting_plane_search(const Graph& g, Formulation f, const SearchConfig& cfg,
                                  const BoundOptions& opts = {});

/// Distance of the current X_I to STAB^2(G_I), or SSTAB^2(G_I) for SESH.
double subset_violation(const Graph& g, Formulation f, const Eigen::MatrixXd& X, const VertexSubset& subset);

struct FormulationComparison {
  BoundReport esh;
  BoundReport cesh;
  BoundReport sesh;
  /// z^E <= z^C + 1e-6
  bool esh_below_cesh = false;
  /// |z^S - z^C| <= 1e-5
  bool sesh_equals_cesh = false;
  std::string diagnostics;
};

FormulationComparison compare_formulations(const Graph& g, const std::vector<VertexSubset>& subsets,
                                           const BoundOptions& opts = {}, EscMode mode = EscMode::lambda);

/// Maps an optimal (x, X) of the lifted model to the point X / gamma,
/// gamma = 1^T x, of the order-n model, with convex weights
/// lambda_1 / gamma + (gamma - 1) / gamma on the empty set and
/// lambda_i / gamma elsewhere. Both problems must hold lambda-mode
/// constraints on the same subsets in the same order.
std::vector<BlockValue> compress_esh_point(const SdpProblem& esh, std::span<const BlockValue> esh_point,
                                           const SdpProblem& cesh);

/// round,formulation,bound,escs_added,escs_total,solve_seconds
void write_trajectory_csv(std::ostream& out, const BoundReport& report, bool with_time = true);

}  // namespace exactsub
