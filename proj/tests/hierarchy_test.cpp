#include <doctest.h>

#include <sstream>

#include "exactsub/hierarchy.hpp"
#include "exactsub/rng.hpp"
#include "exactsub/stable_sets.hpp"
#include "oracles.hpp"

using namespace exactsub;

namespace {

VertexSubset whole(int n) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) all[static_cast<std::size_t>(v)] = v;
  return VertexSubset(all);
}

std::vector<VertexSubset> random_subsets(SplitMix64& rng, int n, int count, int max_order) {
  std::vector<VertexSubset> out;
  for (int c = 0; c < count; ++c) {
    const int k = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_order - 1)));
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) pool[static_cast<std::size_t>(v)] = v;
    for (int i = 0; i < k; ++i)
      std::swap(pool[static_cast<std::size_t>(i)], pool[i + rng.below(static_cast<std::uint64_t>(n - i))]);
    pool.resize(static_cast<std::size_t>(k));
    out.emplace_back(pool);
  }
  return out;
}

void check_monotone(const BoundReport& rep) {
  for (std::size_t i = 1; i < rep.trajectory.size(); ++i)
    CHECK(rep.trajectory[i].bound <= rep.trajectory[i - 1].bound + 1e-6);
}

}  // namespace

TEST_SUITE("hierarchy") {

TEST_CASE("the full subset of C5 gives alpha in every formulation") {
  const Graph c5 = cycle_graph(5);
  for (Formulation f : {Formulation::esh, Formulation::cesh, Formulation::sesh}) {
    const BoundReport rep = compute_bound(c5, f, {{whole(5)}});
    CHECK(rep.status == SolveStatus::optimal);
    CHECK(std::abs(rep.bound - 2.0) <= 1e-5);
    CHECK(rep.alpha_lb == 2);
    CHECK(rep.floor_bound() == 2);
    CHECK(rep.selection_sizes() == std::map<int, int>{{5, 1}});
  }
  CHECK(to_string(Formulation::esh) == "ESH");
  CHECK(to_string(Formulation::cesh) == "CESH");
  CHECK(to_string(Formulation::sesh) == "SESH");
}

TEST_CASE("levels: theta at 0 and 1, alpha at n, non-increasing in between") {
  SplitMix64 rng(4);
  for (int trial = 0; trial < 3; ++trial) {
    const Graph g = erdos_renyi(6 + trial, 0.45, rng.next());
    const int n = g.order();
    const double a = oracle::alpha(g);
    for (Formulation f : {Formulation::esh, Formulation::cesh}) {
      std::vector<double> level;
      for (int k = 0; k <= n; ++k) level.push_back(compute_level(g, f, k).bound);
      CHECK(std::abs(level[1] - level[0]) <= 1e-6);
      CHECK(std::abs(level[static_cast<std::size_t>(n)] - a) <= 1e-5);
      for (int k = 1; k <= n; ++k) {
        CHECK(level[static_cast<std::size_t>(k)] <= level[static_cast<std::size_t>(k - 1)] + 1e-6);
        CHECK(level[static_cast<std::size_t>(k)] >= a - 1e-6);
      }
    }
  }
  CHECK_THROWS_AS(compute_level(paley(61), Formulation::esh, 5), ResourceLimitError);
}

TEST_CASE("search on bipartite graphs keeps the bound at alpha") {
  SearchConfig cfg;
  cfg.order = 2;
  for (const Graph& g : {path_graph(7), cycle_graph(8)}) {
    const SearchResult r = cutting_plane_search(g, Formulation::esh, cfg);
    CHECK(r.selection.subsets.empty());
    CHECK(r.report.stopped_early);
    REQUIRE(r.report.trajectory.size() == 1);
    CHECK(std::abs(r.report.bound - 4.0) <= 1e-6);
  }
  // P8 has several maximum stable sets; the central optimum may leave some
  // pairs outside the polytope, but the bound cannot move.
  const SearchResult r = cutting_plane_search(path_graph(8), Formulation::esh, cfg);
  for (const auto& rec : r.report.trajectory) CHECK(std::abs(rec.bound - 4.0) <= 1e-6);
}

TEST_CASE("search on C5 with the full order closes the gap in one round") {
  SearchConfig cfg;
  cfg.order = 5;
  cfg.rounds = 1;
  const SearchResult r = cutting_plane_search(cycle_graph(5), Formulation::esh, cfg);
  REQUIRE(r.report.trajectory.size() == 2);
  CHECK(std::abs(r.report.trajectory[0].bound - oracle::odd_cycle_theta(5)) <= 1e-6);
  CHECK(r.report.trajectory[1].escs_added == 1);
  CHECK(r.report.trajectory[1].escs_total == 1);
  CHECK(std::abs(r.report.bound - 2.0) <= 1e-5);
  CHECK(r.selection.subsets == std::vector<VertexSubset>{whole(5)});
}

TEST_CASE("search trajectories never increase and runs repeat exactly") {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 3; ++trial) {
    const Graph g = erdos_renyi(11, 0.3, rng.next());
    SearchConfig cfg;
    cfg.order = 3;
    cfg.rounds = 3;
    cfg.max_per_round = 20;
    cfg.seed = 17 + static_cast<std::uint64_t>(trial);
    for (Formulation f : {Formulation::esh, Formulation::cesh, Formulation::sesh}) {
      const SearchResult r = cutting_plane_search(g, f, cfg);
      check_monotone(r.report);
      CHECK(r.report.bound >= oracle::alpha(g) - 1e-6);
      CHECK(r.report.trajectory.size() <= 4);
      int total = 0;
      for (const auto& rec : r.report.trajectory) {
        total += rec.escs_added;
        CHECK(rec.escs_total == total);
        CHECK(rec.escs_added <= cfg.max_per_round);
      }
      if (f == Formulation::cesh) {
        const SearchResult again = cutting_plane_search(g, f, cfg);
        CHECK(again.selection.subsets == r.selection.subsets);
        CHECK(again.report.bound == r.report.bound);
      }
    }
  }
}

TEST_CASE("comparing formulations") {
  const Graph g = erdos_renyi(9, 0.4, 12);
  const double theta = compute_bound(g, Formulation::esh, {}).bound;
  const auto none = compare_formulations(g, {});
  CHECK(std::abs(none.esh.bound - theta) <= 1e-6);
  CHECK(std::abs(none.cesh.bound - theta) <= 1e-6);
  CHECK(std::abs(none.sesh.bound - theta) <= 1e-6);

  const auto full = compare_formulations(g, {whole(9)});
  const double a = oracle::alpha(g);
  CHECK(std::abs(full.esh.bound - a) <= 1e-5);
  CHECK(std::abs(full.cesh.bound - a) <= 1e-5);
  CHECK(std::abs(full.sesh.bound - a) <= 1e-5);

  SplitMix64 rng(31);
  const Graph h = erdos_renyi(12, 0.4, 6);
  const auto triples = compare_formulations(h, random_subsets(rng, 12, 10, 3));
  CHECK(triples.esh_below_cesh);
  CHECK(triples.sesh_equals_cesh);
  CHECK(triples.esh.bound <= triples.cesh.bound + 1e-6);
  CHECK(triples.sesh.selection.scaled);
}

TEST_CASE("the compressed lifted optimum is feasible for the order-n model") {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g = erdos_renyi(10, 0.35, rng.next());
    const EscSelection sel{random_subsets(rng, 10, 6, 4)};
    const Relaxation esh = solve_relaxation(g, Formulation::esh, sel);
    REQUIRE(esh.solution.status == SolveStatus::optimal);
    const SdpProblem cesh = build_relaxation(g, Formulation::cesh, sel);
    const auto point = compress_esh_point(esh.problem, esh.solution.primal, cesh);
    const auto rep = check_primal(cesh, point);
    CHECK(rep.primal_max <= 1e-6);
    CHECK(rep.primal_cone_min >= -1e-8);
    CHECK(rep.objective >= esh.solution.objective - 1e-5);
  }
}

TEST_CASE("trajectory CSV") {
  BoundReport rep;
  rep.formulation = Formulation::cesh;
  rep.trajectory = {{0, 2.2360679, 0, 0, 0.25, 10, SolveStatus::optimal}, {1, 2.0, 1, 1, 0.5, 12, SolveStatus::optimal}};
  std::ostringstream timed, untimed;
  write_trajectory_csv(timed, rep);
  write_trajectory_csv(untimed, rep, false);
  CHECK(timed.str() ==
        "round,formulation,bound,escs_added,escs_total,solve_seconds\n"
        "0,CESH,2.236068,0,0,0.250\n"
        "1,CESH,2.000000,1,1,0.500\n");
  CHECK(untimed.str() ==
        "round,formulation,bound,escs_added,escs_total,solve_seconds\n"
        "0,CESH,2.236068,0,0,0.000\n"
        "1,CESH,2.000000,1,1,0.000\n");
}

TEST_CASE("invalid search configurations") {
  const Graph g = cycle_graph(7);
  SearchConfig cfg;
  cfg.rounds = 0;
  CHECK_THROWS_AS(cutting_plane_search(g, Formulation::esh, cfg), std::invalid_argument);
  cfg = {};
  cfg.order = 9;
  CHECK_THROWS_AS(cutting_plane_search(g, Formulation::esh, cfg), std::invalid_argument);
  cfg = {};
  cfg.mode = EscMode::facets;
  CHECK_THROWS_AS(cutting_plane_search(g, Formulation::sesh, cfg), std::invalid_argument);
  CHECK_THROWS_AS(compute_bound(g, Formulation::sesh, {{VertexSubset{0, 1}}, EscMode::facets}), std::invalid_argument);
}

}  // TEST_SUITE
