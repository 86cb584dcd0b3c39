// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 only when
// every selected criterion passes. `--only N` runs a single criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "exactsub/facets.hpp"
#include "exactsub/graph_io.hpp"
#include "exactsub/hierarchy.hpp"
#include "exactsub/rng.hpp"
#include "exactsub/stable_sets.hpp"
#include "oracles.hpp"

using namespace exactsub;

namespace {

namespace tol {
constexpr double baseline = 1e-6;
constexpr double odd_cycle = 1e-4;
constexpr double paper = 1e-3;
constexpr double exact_level = 1e-5;
constexpr double ordering = 1e-6;
constexpr double transform_residual = 1e-6;
constexpr double transform_objective = 1e-5;
constexpr double scaled_equal = 1e-5;
constexpr double representation = 1e-6;
constexpr double flat = 1e-2;
constexpr double sandwich = 1e-6;
}  // namespace tol

namespace limit {
constexpr double facets_seconds = 60.0;
constexpr double baseline_solve_seconds = 1.0;
constexpr double paper_seconds = 15 * 60.0;
constexpr double paley_search_seconds = 10 * 60.0;
}  // namespace limit

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

VertexSubset whole(int n) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) all[static_cast<std::size_t>(v)] = v;
  return VertexSubset(all);
}

VertexSubset random_subset(SplitMix64& rng, int n, int k) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) pool[static_cast<std::size_t>(v)] = v;
  for (int i = 0; i < k; ++i)
    std::swap(pool[static_cast<std::size_t>(i)], pool[i + rng.below(static_cast<std::uint64_t>(n - i))]);
  pool.resize(static_cast<std::size_t>(k));
  return VertexSubset(pool);
}

/// Random graphs for the exactness and level suites (n in 6..9).
std::vector<Graph> small_suite() {
  SplitMix64 rng(20240601);
  std::vector<Graph> out;
  for (int i = 0; i < 20; ++i) {
    const int n = 6 + static_cast<int>(rng.below(4));
    const double p = 0.2 + 0.5 * rng.uniform();
    out.push_back(erdos_renyi(n, p, rng.next()));
  }
  return out;
}

struct Instance {
  Graph graph;
  std::vector<VertexSubset> subsets;
};

/// Random (graph, J) pairs with n <= 14 and subset orders 2..4.
std::vector<Instance> ordering_suite() {
  SplitMix64 rng(777);
  std::vector<Instance> out;
  for (int i = 0; i < 50; ++i) {
    const int n = 8 + static_cast<int>(rng.below(7));
    Instance inst{erdos_renyi(n, 0.2 + 0.4 * rng.uniform(), rng.next()), {}};
    const int count = 3 + static_cast<int>(rng.below(8));
    std::set<VertexSubset> seen;
    for (int c = 0; c < count; ++c) {
      VertexSubset s = random_subset(rng, n, 2 + static_cast<int>(rng.below(3)));
      if (seen.insert(s).second) inst.subsets.push_back(s);
    }
    out.push_back(std::move(inst));
  }
  return out;
}

Verdict criterion_1() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const std::size_t expected[] = {4, 16, 56, 368};
  for (int k = 2; k <= 5; ++k) {
    const std::size_t got = facets_stab2_empty(k).inequalities.size();
    v.detail << "k=" << k << ":" << got << " ";
    v.require(got == expected[k - 2], "facet count for k=" + std::to_string(k));
  }
  for (int k : {2, 3}) {
    auto canon = [](std::vector<LinearInequality> list) {
      std::set<LinearInequality> s;
      for (auto& q : list) {
        q.canonicalize();
        s.insert(q);
      }
      return s;
    };
    v.require(canon(facets_stab2_empty(k).inequalities) == canon(handcoded_facets(k).inequalities),
              "hand-coded system differs for k=" + std::to_string(k));
  }
  const double secs = seconds_since(start);
  v.require(secs < limit::facets_seconds, "runtime");
  v.detail << "(" << secs << " s)";
  return v;
}

Verdict criterion_2() {
  Verdict v;
  double slowest = 0.0;
  auto check = [&](const SdpProblem& p, double expected, double t, const std::string& what) {
    const Solution s = solve(p);
    slowest = std::max(slowest, s.seconds);
    v.require(s.status == SolveStatus::optimal && std::abs(s.objective - expected) <= t, what);
    v.require(s.seconds < limit::baseline_solve_seconds, what + " runtime");
  };
  for (int n = 1; n <= 10; ++n) {
    for (bool lifted : {true, false}) {
      const auto build = lifted ? build_theta_nplus1 : build_theta_n;
      check(build(empty_graph(n)), n, tol::baseline, "empty graph n=" + std::to_string(n));
      check(build(complete_graph(n)), 1.0, tol::baseline, "complete graph n=" + std::to_string(n));
    }
  }
  const double c5 = oracle::odd_cycle_theta(5);
  check(build_theta_nplus1(cycle_graph(5)), c5, tol::odd_cycle, "C5 lifted");
  check(build_theta_n(cycle_graph(5)), c5, tol::odd_cycle, "C5 order-n");
  v.detail << "theta(C5) oracle " << c5 << ", slowest solve " << slowest << " s";
  return v;
}

Verdict criterion_3() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const Graph paley61 = paley(61);
  const Graph hamming = hamming_complement_6_4();
  const double tp = solve(build_theta_n(paley61)).objective;
  const double th = solve(build_theta_nplus1(hamming)).objective;
  const BoundReport pairs = compute_level(hamming, Formulation::esh, 2);
  const int ap = alpha_bruteforce(paley61);
  const int ah = alpha_bruteforce(hamming);
  v.require(std::abs(tp - 7.8102) <= tol::paper, "theta(Paley61)");
  v.require(std::abs(th - 5.3333) <= tol::paper, "theta(hamming6_4)");
  v.require(pairs.status == SolveStatus::optimal && std::abs(pairs.bound - 4.0) <= tol::paper,
            "hamming6_4 all-pairs ESH");
  v.require(ap == 5 && ah == 4, "alpha oracles");
  const double secs = seconds_since(start);
  v.require(secs < limit::paper_seconds, "runtime");
  v.detail << "theta(Paley61)=" << tp << " theta(hamming6_4)=" << th << " z^E_2(hamming6_4)=" << pairs.bound
           << " alpha=" << ap << "," << ah << " (" << secs << " s)";
  return v;
}

Verdict criterion_4() {
  Verdict v;
  double worst = 0.0;
  for (const Graph& g : small_suite()) {
    const double a = oracle::alpha(g);
    for (Formulation f : {Formulation::esh, Formulation::cesh, Formulation::sesh}) {
      const BoundReport rep = compute_bound(g, f, {{whole(g.order())}});
      const double err = std::abs(rep.bound - a);
      worst = std::max(worst, err);
      v.require(rep.status == SolveStatus::optimal && err <= tol::exact_level, g.name() + " " + to_string(f));
    }
  }
  v.detail << "20 graphs, max |z - alpha| = " << worst;
  return v;
}

Verdict criterion_5() {
  Verdict v;
  double worst_rise = 0.0;
  int solves = 0;
  for (const Graph& g : small_suite()) {
    const double a = oracle::alpha(g);
    const double theta = solve(build_theta_n(g)).objective;
    for (Formulation f : {Formulation::esh, Formulation::cesh}) {
      double previous = INFINITY;
      for (int k = 0; k <= g.order(); ++k) {
        const BoundReport rep = compute_level(g, f, k);
        ++solves;
        const std::string what = g.name() + " " + to_string(f) + " k=" + std::to_string(k);
        v.require(rep.status == SolveStatus::optimal, what + " status");
        v.require(rep.bound <= previous + tol::ordering, what + " increases");
        v.require(rep.bound >= a - tol::sandwich && rep.bound <= theta + tol::sandwich, what + " outside [alpha, theta]");
        if (k > 0) worst_rise = std::max(worst_rise, rep.bound - previous);
        previous = rep.bound;
      }
    }
  }
  v.detail << solves << " level solves, largest rise " << worst_rise;
  return v;
}

struct OrderingRun {
  double esh_over_cesh = -INFINITY;
  double transform_residual = 0.0;
  double transform_shortfall = -INFINITY;
  double scaled_gap = 0.0;
  std::vector<std::string> failures7;
  std::vector<std::string> failures6;
};

const OrderingRun& ordering_run() {
  static const OrderingRun run = [] {
    OrderingRun r;
    int idx = 0;
    for (const Instance& inst : ordering_suite()) {
      const std::string tag = "instance " + std::to_string(idx++);
      const EscSelection sel{inst.subsets};
      const Relaxation esh = solve_relaxation(inst.graph, Formulation::esh, sel);
      const Relaxation cesh = solve_relaxation(inst.graph, Formulation::cesh, sel);
      const Relaxation sesh = solve_relaxation(inst.graph, Formulation::sesh, sel);
      const bool ok = esh.solution.status == SolveStatus::optimal && cesh.solution.status == SolveStatus::optimal &&
                      sesh.solution.status == SolveStatus::optimal;
      const double ze = esh.solution.objective, zc = cesh.solution.objective, zs = sesh.solution.objective;
      r.esh_over_cesh = std::max(r.esh_over_cesh, ze - zc);
      if (!ok || ze > zc + tol::ordering) r.failures6.push_back(tag + " ordering");

      const auto point = compress_esh_point(esh.problem, esh.solution.primal, cesh.problem);
      const ResidualReport rep = check_primal(cesh.problem, point);
      const double residual = std::max(rep.primal_max, -rep.primal_cone_min);
      r.transform_residual = std::max(r.transform_residual, residual);
      r.transform_shortfall = std::max(r.transform_shortfall, ze - rep.objective);
      if (residual > tol::transform_residual) r.failures6.push_back(tag + " transform residual");
      if (rep.objective < ze - tol::transform_objective) r.failures6.push_back(tag + " transform objective");

      r.scaled_gap = std::max(r.scaled_gap, std::abs(zs - zc));
      if (!ok || std::abs(zs - zc) > tol::scaled_equal) r.failures7.push_back(tag);
    }
    return r;
  }();
  return run;
}

Verdict criterion_6() {
  Verdict v;
  const OrderingRun& r = ordering_run();
  for (const auto& f : r.failures6) v.require(false, f);
  v.detail << "50 pairs, max z^E - z^C = " << r.esh_over_cesh << ", transform residual " << r.transform_residual
           << ", max z^E - objective " << r.transform_shortfall;
  return v;
}

Verdict criterion_7() {
  Verdict v;
  const OrderingRun& r = ordering_run();
  for (const auto& f : r.failures7) v.require(false, f);
  v.detail << "50 pairs, max |z^S - z^C| = " << r.scaled_gap;
  return v;
}

Verdict criterion_8() {
  Verdict v;
  SplitMix64 rng(4242);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = 7 + static_cast<int>(rng.below(6));
    const Graph g = erdos_renyi(n, 0.2 + 0.4 * rng.uniform(), rng.next());
    std::vector<VertexSubset> subsets;
    std::set<VertexSubset> seen;
    const int count = 4 + static_cast<int>(rng.below(9));
    for (int c = 0; c < count; ++c) {
      VertexSubset s = random_subset(rng, n, 2 + static_cast<int>(rng.below(3)));
      if (seen.insert(s).second) subsets.push_back(s);
    }
    const Formulation f = i % 2 == 0 ? Formulation::esh : Formulation::cesh;
    const BoundReport lam = compute_bound(g, f, {subsets, EscMode::lambda});
    const BoundReport fac = compute_bound(g, f, {subsets, EscMode::facets});
    const double diff = std::abs(lam.bound - fac.bound);
    worst = std::max(worst, diff);
    v.require(lam.status == SolveStatus::optimal && fac.status == SolveStatus::optimal &&
                  diff <= tol::representation,
              "instance " + std::to_string(i));
  }
  v.detail << "20 instances, max |lambda - facets| = " << worst;
  return v;
}

Verdict criterion_9() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const Graph g = paley(61);
  for (int k : {2, 3}) {
    SearchConfig cfg;
    cfg.order = k;
    const SearchResult r = cutting_plane_search(g, Formulation::esh, cfg);
    v.detail << "k=" << k << ":";
    for (const auto& rec : r.report.trajectory) {
      v.detail << " " << rec.bound;
      v.require(std::abs(rec.bound - 7.810) <= tol::flat, "trajectory point k=" + std::to_string(k));
    }
    v.detail << " (" << r.selection.subsets.size() << " ESCs) ";
  }
  const double secs = seconds_since(start);
  v.require(secs < limit::paley_search_seconds, "runtime");
  v.detail << "(" << secs << " s)";
  return v;
}

Verdict criterion_10() {
  Verdict v;
  int files = 0;
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(EXACTSUB_TEST_DATA)) {
    const auto ext = entry.path().extension();
    if (ext == ".col" || ext == ".clq") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    const Graph g = read_graph_file(path);
    const auto a = reference_alpha(g);
    const double theta = solve(build_theta_nplus1(g)).objective;
    SearchConfig cfg;
    cfg.order = std::min(3, g.order());
    cfg.rounds = 2;
    cfg.max_per_round = 50;
    const SearchResult r = cutting_plane_search(g, Formulation::esh, cfg);
    const std::string name = path.filename().string();
    v.require(r.report.bound <= theta + tol::sandwich, name + " above theta");
    v.require(!a || r.report.bound >= *a - tol::sandwich, name + " below alpha");
    v.detail << name << ": alpha=" << (a ? std::to_string(*a) : "?") << " bound=" << r.report.bound
             << " theta=" << theta << "; ";
    ++files;
  }
  v.require(files > 0, "no instance files");
  return v;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict criterion_11() {
  Verdict v;
  const std::string cli = EXACTSUB_CLI_PATH;
  const std::vector<std::string> commands{
      "theta --gen paley:61 --no-time",
      "bound --gen er:20:0.3:4 --k 3 --random 30 --seed 9 --formulation cesh --no-time",
      "level --gen circulant:13:1,5 --k 2 --k 3 --no-time",
      "search --gen er:24:0.25:11 --k 3 --rounds 3 --max-per-round 20 --seed 3 --no-time",
      "compare --gen er:12:0.4:7 --k 3 --random 15 --seed 2 --no-time --format json",
      "alpha --gen hamming64 --no-time",
  };
  const auto dir = std::filesystem::temp_directory_path();
  int index = 0;
  for (const auto& cmd : commands) {
    std::string outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto file = dir / ("exactsub_accept_" + std::to_string(index) + "_" + std::to_string(rep) + ".out");
      const std::string line = "\"" + cli + "\" " + cmd + " > \"" + file.string() + "\" 2>/dev/null";
      const int code = std::system(line.c_str());
      v.require(code == 0, "exit status of: " + cmd);
      outputs[rep] = slurp(file);
      std::filesystem::remove(file);
    }
    v.require(!outputs[0].empty() && outputs[0] == outputs[1], "bytes differ for: " + cmd);
    ++index;
  }
  v.detail << commands.size() << " commands run twice";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"facet counts", criterion_1},
      {"theta baselines", criterion_2},
      {"values on regenerable instances", criterion_3},
      {"exactness at the full level", criterion_4},
      {"hierarchy ordering", criterion_5},
      {"lifted below compressed", criterion_6},
      {"scaled equals compressed", criterion_7},
      {"lambda and facet representations agree", criterion_8},
      {"Paley61 search stays flat", criterion_9},
      {"file instances between alpha and theta", criterion_10},
      {"CLI determinism", criterion_11},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (only != 0 && only != number) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    all = all && v.pass;
    std::cout << "criterion " << number << " " << (v.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
              << v.detail.str() << " [" << seconds_since(start) << " s]" << std::endl;
  }
  return all ? 0 : 1;
}
