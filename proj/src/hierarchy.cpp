#include "exactsub/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "exactsub/projection.hpp"
#include "exactsub/rng.hpp"
#include "exactsub/stable_sets.hpp"

namespace exactsub {

std::string to_string(Formulation f) {
  switch (f) {
    case Formulation::esh: return "ESH";
    case Formulation::cesh: return "CESH";
    case Formulation::sesh: return "SESH";
  }
  return "unknown";
}

std::map<int, int> BoundReport::selection_sizes() const {
  std::map<int, int> sizes;
  for (const auto& s : selection.subsets) ++sizes[s.order()];
  return sizes;
}

int BoundReport::floor_bound() const { return static_cast<int>(std::floor(bound + 1e-6)); }

SdpProblem build_relaxation(const Graph& g, Formulation f, const EscSelection& sel) {
  EscSelection s = sel;
  s.scaled = f == Formulation::sesh;
  SdpProblem base = f == Formulation::esh ? build_theta_nplus1(g) : build_theta_n(g);
  return add_escs(std::move(base), g, s);
}

Relaxation solve_relaxation(const Graph& g, Formulation f, const EscSelection& sel, const SolverSettings& settings) {
  Relaxation r{build_relaxation(g, f, sel), {}};
  r.solution = solve(r.problem, settings);
  return r;
}

std::optional<int> reference_alpha(const Graph& g, const BoundOptions& opts) {
  if (g.order() > opts.alpha_max_order) return std::nullopt;
  try {
    return alpha_bruteforce(g, opts.alpha_node_limit);
  } catch (const ResourceLimitError&) {
    return std::nullopt;
  }
}

namespace {

BoundReport make_report(const Graph& g, Formulation f, const EscSelection& sel, const Solution& sol,
                        const BoundOptions& opts) {
  BoundReport rep;
  rep.formulation = f;
  rep.graph_name = g.name();
  rep.n = g.order();
  rep.m = static_cast<int>(g.num_edges());
  rep.selection = sel;
  rep.selection.scaled = f == Formulation::sesh;
  rep.bound = sol.objective;
  rep.alpha_lb = reference_alpha(g, opts);
  rep.status = sol.status;
  rep.iterations = sol.iterations;
  rep.seconds = sol.seconds;
  return rep;
}

}  // namespace

BoundReport compute_bound(const Graph& g, Formulation f, const EscSelection& sel, const BoundOptions& opts) {
  const Relaxation r = solve_relaxation(g, f, sel, opts.solver);
  BoundReport rep = make_report(g, f, sel, r.solution, opts);
  rep.selection.subsets.clear();
  for (const auto& rec : r.problem.escs) rep.selection.subsets.push_back(rec.subset);
  rep.trajectory.push_back({0, rep.bound, static_cast<int>(rep.selection.subsets.size()),
                            static_cast<int>(rep.selection.subsets.size()), rep.seconds, rep.iterations, rep.status});
  return rep;
}

BoundReport compute_level(const Graph& g, Formulation f, int k, const BoundOptions& opts, EscMode mode,
                          std::size_t cap) {
  EscSelection sel;
  sel.mode = mode;
  if (k > 0) sel.subsets = all_subsets(g.order(), k, cap);
  return compute_bound(g, f, sel, opts);
}

double subset_violation(const Graph& g, Formulation f, const Eigen::MatrixXd& X, const VertexSubset& subset) {
  const int k = subset.order();
  Eigen::MatrixXd sub(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) sub(a, b) = X(subset[static_cast<std::size_t>(a)], subset[static_cast<std::size_t>(b)]);
  const auto family = enumerate_stable_sets(induced_subgraph(g, subset));
  return project_onto_stab2(sub, family, f == Formulation::sesh).distance;
}

namespace {

VertexSubset random_subset(SplitMix64& rng, int n, int k) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(n - i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return VertexSubset(std::move(pool));
}

// Grows a subset from `seed` by repeatedly adding the vertex with the largest
// diagonal value, preferring neighbours of the current members.
VertexSubset greedy_subset(const Graph& g, const Eigen::MatrixXd& X, int seed, int k) {
  std::vector<int> members{seed};
  std::vector<bool> in(static_cast<std::size_t>(g.order()), false);
  in[static_cast<std::size_t>(seed)] = true;
  while (static_cast<int>(members.size()) < k) {
    int best = -1;
    bool best_adjacent = false;
    for (int w = 0; w < g.order(); ++w) {
      if (in[static_cast<std::size_t>(w)]) continue;
      const bool adjacent = std::any_of(members.begin(), members.end(), [&](int u) { return g.adjacent(u, w); });
      if (best < 0 || (adjacent && !best_adjacent) || (adjacent == best_adjacent && X(w, w) > X(best, best))) {
        best = w;
        best_adjacent = adjacent;
      }
    }
    members.push_back(best);
    in[static_cast<std::size_t>(best)] = true;
  }
  return VertexSubset(std::move(members));
}

std::vector<VertexSubset> swap_neighbours(const Graph& g, const VertexSubset& s) {
  std::set<int> hood;
  for (int u : s.members())
    for (int w : g.neighbors(u))
      if (!s.contains(w)) hood.insert(w);
  std::vector<VertexSubset> out;
  for (int u : s.members()) {
    for (int w : hood) {
      std::vector<int> next;
      for (int v : s.members())
        if (v != u) next.push_back(v);
      next.push_back(w);
      std::sort(next.begin(), next.end());
      out.emplace_back(std::move(next));
    }
  }
  return out;
}

struct Scored {
  double distance;
  VertexSubset subset;
};

bool worse_first(const Scored& a, const Scored& b) {
  if (a.distance != b.distance) return a.distance > b.distance;
  return a.subset < b.subset;
}

}  // namespace

SearchResult cutting_plane_search(const Graph& g, Formulation f, const SearchConfig& cfg, const BoundOptions& opts) {
  const int n = g.order();
  if (cfg.rounds < 1 || cfg.max_per_round < 1) throw std::invalid_argument("rounds and max_per_round must be >= 1");
  if (cfg.order < 1 || cfg.order > 8 || cfg.order > n)
    throw std::invalid_argument("search order must lie in 1..min(8, n)");
  if (f == Formulation::sesh && cfg.mode != EscMode::lambda)
    throw std::invalid_argument("scaled constraints are only available in lambda mode");
  const int k = cfg.order;
  const int budget = cfg.candidate_budget > 0 ? cfg.candidate_budget : 50 * n;
  SplitMix64 rng(cfg.seed);

  EscSelection sel;
  sel.mode = cfg.mode;
  sel.scaled = f == Formulation::sesh;
  std::set<VertexSubset> chosen;
  SdpProblem problem = f == Formulation::esh ? build_theta_nplus1(g) : build_theta_n(g);

  SearchResult result;
  BoundReport& rep = result.report;
  int added = 0;
  for (int round = 0;; ++round) {
    const Solution sol = solve(problem, opts.solver);
    rep.trajectory.push_back({round, sol.objective, added, static_cast<int>(sel.subsets.size()), sol.seconds,
                              sol.iterations, sol.status});
    rep.bound = sol.objective;
    rep.status = sol.status;
    rep.iterations += sol.iterations;
    rep.seconds += sol.seconds;
    if (round == cfg.rounds || sol.status == SolveStatus::numerical_failure ||
        sol.status == SolveStatus::infeasible_suspect)
      break;

    const Eigen::MatrixXd X = vertex_matrix(problem, sol.primal);
    std::set<VertexSubset> seen;
    std::vector<Scored> violated;
    auto consider = [&](const VertexSubset& s) {
      if (chosen.count(s) || !seen.insert(s).second) return;
      const double d = subset_violation(g, f, X, s);
      if (d > cfg.tol_viol) violated.push_back({d, s});
    };
    for (int i = 0; i < budget; ++i) consider(random_subset(rng, n, k));
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return X(a, a) > X(b, b); });
    for (int i = 0; i < k; ++i) consider(greedy_subset(g, X, order[static_cast<std::size_t>(i)], k));
    std::sort(violated.begin(), violated.end(), worse_first);
    const std::size_t seeds = std::min(violated.size(), static_cast<std::size_t>(cfg.max_per_round));
    for (std::size_t i = 0; i < seeds; ++i) {
      const VertexSubset base = violated[i].subset;
      for (const auto& s : swap_neighbours(g, base)) consider(s);
    }
    std::sort(violated.begin(), violated.end(), worse_first);
    if (violated.empty()) {
      rep.stopped_early = true;
      break;
    }
    if (violated.size() > static_cast<std::size_t>(cfg.max_per_round))
      violated.resize(static_cast<std::size_t>(cfg.max_per_round));
    EscSelection batch = sel;
    batch.subsets.clear();
    for (const auto& v : violated) {
      chosen.insert(v.subset);
      sel.subsets.push_back(v.subset);
      batch.subsets.push_back(v.subset);
    }
    problem = add_escs(std::move(problem), g, batch);
    added = static_cast<int>(batch.subsets.size());
  }

  rep.formulation = f;
  rep.graph_name = g.name();
  rep.n = n;
  rep.m = static_cast<int>(g.num_edges());
  rep.selection = sel;
  rep.alpha_lb = reference_alpha(g, opts);
  result.selection = sel;
  return result;
}

FormulationComparison compare_formulations(const Graph& g, const std::vector<VertexSubset>& subsets,
                                           const BoundOptions& opts, EscMode mode) {
  EscSelection sel;
  sel.subsets = subsets;
  sel.mode = mode;
  FormulationComparison cmp;
  cmp.esh = compute_bound(g, Formulation::esh, sel, opts);
  cmp.cesh = compute_bound(g, Formulation::cesh, sel, opts);
  EscSelection scaled = sel;
  scaled.mode = EscMode::lambda;
  cmp.sesh = compute_bound(g, Formulation::sesh, scaled, opts);
  cmp.esh_below_cesh = cmp.esh.bound <= cmp.cesh.bound + 1e-6;
  cmp.sesh_equals_cesh = std::abs(cmp.sesh.bound - cmp.cesh.bound) <= 1e-5;
  std::ostringstream diag;
  diag << std::setprecision(10);
  if (!cmp.esh_below_cesh)
    diag << "ESH bound " << cmp.esh.bound << " exceeds CESH bound " << cmp.cesh.bound << " by more than 1e-6\n";
  if (!cmp.sesh_equals_cesh)
    diag << "SESH bound " << cmp.sesh.bound << " differs from CESH bound " << cmp.cesh.bound << " by more than 1e-5\n";
  for (const BoundReport* r : {&cmp.esh, &cmp.cesh, &cmp.sesh})
    if (r->status != SolveStatus::optimal)
      diag << to_string(r->formulation) << " solve ended with status " << to_string(r->status) << '\n';
  cmp.diagnostics = diag.str();
  return cmp;
}

std::vector<BlockValue> compress_esh_point(const SdpProblem& esh, std::span<const BlockValue> esh_point,
                                           const SdpProblem& cesh) {
  if (esh.formulation != BaseFormulation::theta_nplus1 || cesh.formulation != BaseFormulation::theta_n)
    throw std::invalid_argument("expected a lifted model and an order-n model");
  if (esh.escs.size() != cesh.escs.size()) throw std::invalid_argument("constraint lists differ");
  const Eigen::VectorXd x = vertex_vector(esh, esh_point);
  const double gamma = x.sum();
  if (gamma <= 0.0) throw std::invalid_argument("1^T x is not positive");

  std::vector<BlockValue> out(cesh.blocks.size());
  out[static_cast<std::size_t>(cesh.matrix_block)].matrix = vertex_matrix(esh, esh_point) / gamma;
  if (cesh.nonneg_block >= 0)
    out[static_cast<std::size_t>(cesh.nonneg_block)].values =
        Eigen::VectorXd::Zero(cesh.blocks[static_cast<std::size_t>(cesh.nonneg_block)].dim);
  for (std::size_t e = 0; e < esh.escs.size(); ++e) {
    const EscRecord& from = esh.escs[e];
    const EscRecord& to = cesh.escs[e];
    if (from.mode != EscMode::lambda || to.mode != EscMode::lambda || from.scaled || to.scaled ||
        from.subset != to.subset || from.stable_sets != to.stable_sets || from.stable_sets.front() != 0)
      throw std::invalid_argument("constraint " + std::to_string(e) + " does not match");
    Eigen::VectorXd lambda = esc_variables(esh, esh_point, e) / gamma;
    lambda(0) += (gamma - 1.0) / gamma;
    out[static_cast<std::size_t>(cesh.nonneg_block)].values.segment(to.first_variable, to.variable_count) = lambda;
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const BoundReport& report, bool with_time) {
  out << "round,formulation,bound,escs_added,escs_total,solve_seconds\n";
  for (const auto& r : report.trajectory) {
    out << r.round << ',' << to_string(report.formulation) << ',' << std::fixed << std::setprecision(6) << r.bound
        << ',' << r.escs_added << ',' << r.escs_total << ',' << std::setprecision(3)
        << (with_time ? r.solve_seconds : 0.0) << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace exactsub
