#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "exactsub/facets.hpp"
#include "exactsub/hierarchy.hpp"
#include "exactsub/rng.hpp"
#include "exactsub/sdpa_io.hpp"
#include "exactsub/stable_sets.hpp"
#include "generator_spec.hpp"

namespace exactsub::cli {

namespace {

struct Row {
  std::string name;
  int n = 0;
  int m = 0;
  std::string formulation;
  std::string k_or_j;
  double bound = 0.0;
  std::optional<int> alpha;
  double seconds = 0.0;
  int iters = 0;
  std::string status;
};

struct Source {
  std::string label;
  Graph graph;
};

std::string fixed(double value, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << value;
  return s.str();
}

void write_rows(std::ostream& out, const std::vector<Row>& rows, const std::string& format, bool no_time) {
  const auto seconds = [&](const Row& r) { return fixed(no_time ? 0.0 : r.seconds, 3); };
  if (format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json o;
      o["name"] = r.name;
      o["n"] = r.n;
      o["m"] = r.m;
      o["formulation"] = r.formulation;
      o["k_or_J"] = r.k_or_j;
      o["bound"] = std::round(r.bound * 1e6) / 1e6;
      o["alpha"] = r.alpha ? nlohmann::ordered_json(*r.alpha) : nlohmann::ordered_json(nullptr);
      o["solve_s"] = no_time ? 0.0 : std::round(r.seconds * 1e3) / 1e3;
      o["iters"] = r.iters;
      o["status"] = r.status;
      arr.push_back(std::move(o));
    }
    out << arr.dump(2) << '\n';
    return;
  }
  if (format == "pretty") {
    out << std::left << std::setw(16) << "name" << std::right << std::setw(5) << "n" << std::setw(7) << "m" << "  "
        << std::left << std::setw(10) << "form" << std::setw(12) << "k/J" << std::right << std::setw(12) << "bound"
        << std::setw(7) << "alpha" << std::setw(10) << "time[s]" << std::setw(7) << "iters" << "  status\n";
    for (const auto& r : rows) {
      out << std::left << std::setw(16) << r.name << std::right << std::setw(5) << r.n << std::setw(7) << r.m << "  "
          << std::left << std::setw(10) << r.formulation << std::setw(12) << r.k_or_j << std::right << std::setw(12)
          << fixed(r.bound, 6) << std::setw(7) << (r.alpha ? std::to_string(*r.alpha) : "-") << std::setw(10)
          << seconds(r) << std::setw(7) << r.iters << "  " << r.status;
      if (r.alpha && r.status == "optimal" && std::floor(r.bound + 1e-6) == *r.alpha &&
          r.bound > *r.alpha + 1e-6)
        out << "  (floor matches alpha)";
      out << '\n';
    }
    return;
  }
  out << "name,n,m,formulation,k_or_J,bound,alpha,solve_s,iters,status\n";
  for (const auto& r : rows)
    out << r.name << ',' << r.n << ',' << r.m << ',' << r.formulation << ',' << r.k_or_j << ',' << fixed(r.bound, 6)
        << ',' << (r.alpha ? std::to_string(*r.alpha) : "") << ',' << seconds(r) << ',' << r.iters << ','
        << r.status << '\n';
}

Formulation parse_formulation(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "esh") return Formulation::esh;
  if (t == "cesh") return Formulation::cesh;
  if (t == "sesh") return Formulation::sesh;
  throw UsageError("unknown formulation '" + text + "' (expected esh, cesh or sesh)");
}

EscMode parse_mode(const std::string& text) {
  if (text == "lambda") return EscMode::lambda;
  if (text == "facets") return EscMode::facets;
  throw UsageError("unknown constraint mode '" + text + "' (expected lambda or facets)");
}

std::vector<VertexSubset> parse_subsets(const std::string& text, int n) {
  std::vector<VertexSubset> out;
  std::istringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::vector<int> members;
    std::istringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) {
      int v = 0;
      try {
        std::size_t used = 0;
        v = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw UsageError("subset '" + group + "': '" + item + "' is not a vertex label");
      }
      if (v < 1 || v > n) throw UsageError("subset '" + group + "': vertex " + item + " outside 1.." + std::to_string(n));
      members.push_back(v - 1);
    }
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end())
      throw UsageError("subset '" + group + "' repeats a vertex");
    if (!members.empty()) out.emplace_back(std::move(members));
  }
  return out;
}

std::vector<VertexSubset> random_subsets(int n, int k, int count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::set<VertexSubset> seen;
  std::vector<VertexSubset> out;
  double available = 1.0;
  for (int i = 0; i < k; ++i) available = available * (n - i) / (i + 1);
  const int target = static_cast<int>(std::min<double>(count, available));
  while (static_cast<int>(out.size()) < target) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i)
      std::swap(pool[static_cast<std::size_t>(i)],
                pool[static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(n - i))]);
    pool.resize(static_cast<std::size_t>(k));
    VertexSubset s(std::move(pool));
    if (seen.insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

struct Selection {
  EscSelection sel;
  std::string label;
};

Selection selection_for(const RunConfig& cfg, const Graph& g) {
  Selection out;
  out.sel.mode = parse_mode(cfg.mode);
  const bool have_k = !cfg.k.empty();
  if (!cfg.subsets.empty()) {
    if (cfg.all_subsets || cfg.random_subsets > 0) throw UsageError("--subsets excludes --all-subsets and --random");
    out.sel.subsets = parse_subsets(cfg.subsets, g.order());
    out.label = "J=" + std::to_string(out.sel.subsets.size());
    return out;
  }
  if (!have_k || cfg.k.size() != 1) throw UsageError("give one --k together with --all-subsets or --random, or --subsets");
  const int k = cfg.k.front();
  if (k < 0 || k > g.order()) throw UsageError("--k must lie in 0.." + std::to_string(g.order()));
  if (cfg.random_subsets > 0) {
    out.sel.subsets = k > 0 ? random_subsets(g.order(), k, cfg.random_subsets, cfg.seed) : std::vector<VertexSubset>{};
    out.label = "k=" + std::to_string(k) + ";J=" + std::to_string(out.sel.subsets.size());
    return out;
  }
  if (k > 0) out.sel.subsets = all_subsets(g.order(), k);
  out.label = "k=" + std::to_string(k);
  return out;
}

Row row_for(const Source& src, const BoundReport& rep, const std::string& label, std::optional<int> alpha) {
  return {src.label, rep.n, rep.m, to_string(rep.formulation), label, rep.bound, alpha, rep.seconds, rep.iterations,
          to_string(rep.status)};
}

Row row_for(const Source& src, const std::string& formulation, const Solution& sol, std::optional<int> alpha) {
  return {src.label, src.graph.order(), static_cast<int>(src.graph.num_edges()), formulation, "-", sol.objective,
          alpha, sol.seconds, sol.iterations, to_string(sol.status)};
}

std::vector<Source> load_sources(const RunConfig& cfg, std::ostream& err) {
  const int given = !cfg.gen.empty() + !cfg.input.empty() + !cfg.batch.empty();
  if (given != 1) throw UsageError("give exactly one of --gen, --input and --batch");
  auto load_one = [&](const std::string& item) {
    if (std::filesystem::exists(item)) {
      std::vector<std::string> warnings;
      Graph g = load_graph_file(item, &warnings);
      for (const auto& w : warnings) err << "warning: " << item << ": " << w << '\n';
      return Source{g.name().empty() ? std::filesystem::path(item).stem().string() : g.name(), g};
    }
    Graph g = parse_generator_spec(item);
    return Source{g.name().empty() ? item : g.name(), g};
  };
  std::vector<Source> out;
  if (!cfg.gen.empty()) {
    out.push_back({"", parse_generator_spec(cfg.gen)});
    out.back().label = out.back().graph.name().empty() ? cfg.gen : out.back().graph.name();
  } else if (!cfg.input.empty()) {
    std::vector<std::string> warnings;
    Graph g = load_graph_file(cfg.input, &warnings);
    for (const auto& w : warnings) err << "warning: " << cfg.input << ": " << w << '\n';
    out.push_back({g.name().empty() ? std::filesystem::path(cfg.input).stem().string() : g.name(), g});
  } else {
    std::ifstream in(cfg.batch);
    if (!in) throw UsageError("cannot open batch file '" + cfg.batch + "'");
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto last = line.find_last_not_of(" \t\r");
      out.push_back(load_one(line.substr(first, last - first + 1)));
    }
    if (out.empty()) throw UsageError("batch file '" + cfg.batch + "' lists no graphs");
  }
  return out;
}

int run_facets(const RunConfig& cfg, std::ostream& out, const std::string& format) {
  std::vector<int> ks = cfg.k.empty() ? std::vector<int>{2, 3, 4, 5} : cfg.k;
  if (!cfg.ieq.empty() && ks.size() != 1) throw UsageError("--ieq needs exactly one --k");
  struct FacetRow {
    int k;
    std::size_t count;
    double seconds;
  };
  std::vector<FacetRow> rows;
  for (int k : ks) {
    if (k < 2 || k > 6) throw UsageError("--k must lie in 2..6 for facets");
    if (k == 6 && !cfg.allow_long) throw UsageError("k=6 takes hours; pass --allow-long-running to run it");
    const auto start = std::chrono::steady_clock::now();
    const FacetSystem sys = facets_stab2_empty(k, cfg.allow_long);
    rows.push_back({k, sys.inequalities.size(),
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
    if (!cfg.ieq.empty()) {
      std::ofstream f(cfg.ieq);
      if (!f) throw UsageError("cannot write '" + cfg.ieq + "'");
      write_ieq(f, sys);
    }
  }
  const auto secs = [&](double s) { return fixed(cfg.no_time ? 0.0 : s, 3); };
  if (format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows)
      arr.push_back({{"k", r.k}, {"facets", r.count}, {"solve_s", cfg.no_time ? 0.0 : std::round(r.seconds * 1e3) / 1e3}});
    out << arr.dump(2) << '\n';
  } else if (format == "csv") {
    out << "k,facets,solve_s\n";
    for (const auto& r : rows) out << r.k << ',' << r.count << ',' << secs(r.seconds) << '\n';
  } else {
    for (const auto& r : rows) out << "k=" << r.k << ": " << r.count << " facets (" << secs(r.seconds) << " s)\n";
  }
  return 0;
}

int run_graph_command(const RunConfig& cfg, std::ostream& out, std::ostream& err, const std::string& format) {
  const auto sources = load_sources(cfg, err);
  BoundOptions opts;
  opts.solver.tol_gap = cfg.tol_gap;
  opts.solver.tol_feas = cfg.tol_feas;
  opts.solver.max_iter = cfg.max_iter;
  if (cfg.verbose) opts.solver.log = &err;
  opts.alpha_max_order = -1;  // computed once per graph below

  std::vector<Row> rows;
  bool failed = false;
  std::ofstream trajectory;
  if (!cfg.trajectory.empty()) {
    if (cfg.command != "search") throw UsageError("--trajectory applies to search only");
    trajectory.open(cfg.trajectory);
    if (!trajectory) throw UsageError("cannot write '" + cfg.trajectory + "'");
  }

  for (const auto& src : sources) {
    const Graph& g = src.graph;
    const auto alpha_start = std::chrono::steady_clock::now();
    std::optional<int> alpha;
    if (!cfg.no_alpha || cfg.command == "alpha") {
      BoundOptions alpha_opts;
      if (cfg.command == "alpha") alpha_opts.alpha_max_order = 1 << 20;
      alpha = reference_alpha(g, alpha_opts);
    }
    const double alpha_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - alpha_start).count();

    if (cfg.command == "alpha") {
      if (!alpha) {
        err << src.label << ": branch and bound exceeded its node budget\n";
        failed = true;
        continue;
      }
      rows.push_back({src.label, g.order(), static_cast<int>(g.num_edges()), "alpha", "-", static_cast<double>(*alpha),
                      alpha, alpha_seconds, 0, "exact"});
    } else if (cfg.command == "theta") {
      const Solution a = solve(build_theta_nplus1(g), opts.solver);
      const Solution b = solve(build_theta_n(g), opts.solver);
      rows.push_back(row_for(src, "theta_n+1", a, alpha));
      rows.push_back(row_for(src, "theta_n", b, alpha));
      failed |= a.status != SolveStatus::optimal || b.status != SolveStatus::optimal;
      if (std::abs(a.objective - b.objective) > 1e-5) {
        err << src.label << ": the two theta formulations differ by " << std::abs(a.objective - b.objective) << '\n';
        failed = true;
      }
    } else if (cfg.command == "bound") {
      const Formulation f = parse_formulation(cfg.formulation);
      const Selection s = selection_for(cfg, g);
      if (!cfg.sdpa.empty()) {
        std::ofstream f_out(cfg.sdpa);
        if (!f_out) throw UsageError("cannot write '" + cfg.sdpa + "'");
        write_sdpa(f_out, build_relaxation(g, f, s.sel));
      }
      const BoundReport rep = compute_bound(g, f, s.sel, opts);
      rows.push_back(row_for(src, rep, s.label, alpha));
      failed |= rep.status != SolveStatus::optimal;
    } else if (cfg.command == "level") {
      const Formulation f = parse_formulation(cfg.formulation);
      if (cfg.k.empty()) throw UsageError("level needs at least one --k");
      for (int k : cfg.k) {
        if (k < 0 || k > g.order()) throw UsageError("--k must lie in 0.." + std::to_string(g.order()));
        const BoundReport rep = compute_level(g, f, k, opts, parse_mode(cfg.mode));
        rows.push_back(row_for(src, rep, "k=" + std::to_string(k), alpha));
        failed |= rep.status != SolveStatus::optimal;
      }
    } else if (cfg.command == "search") {
      if (cfg.k.size() != 1) throw UsageError("search needs exactly one --k");
      SearchConfig sc;
      sc.order = cfg.k.front();
      sc.rounds = cfg.rounds;
      sc.max_per_round = cfg.max_per_round;
      sc.candidate_budget = cfg.budget;
      sc.tol_viol = cfg.tol_viol;
      sc.seed = cfg.seed;
      sc.mode = parse_mode(cfg.mode);
      if (sc.order < 1 || sc.order > std::min(8, g.order())) throw UsageError("--k must lie in 1..min(8, n)");
      if (sc.rounds < 1 || sc.max_per_round < 1) throw UsageError("--rounds and --max-per-round must be at least 1");
      const SearchResult res = cutting_plane_search(g, parse_formulation(cfg.formulation), sc, opts);
      rows.push_back(row_for(src, res.report,
                             "k=" + std::to_string(sc.order) + ";J=" + std::to_string(res.selection.subsets.size()),
                             alpha));
      failed |= res.report.status != SolveStatus::optimal;
      if (trajectory.is_open()) write_trajectory_csv(trajectory, res.report, !cfg.no_time);
    } else if (cfg.command == "compare") {
      const Selection s = selection_for(cfg, g);
      const FormulationComparison cmp = compare_formulations(g, s.sel.subsets, opts, s.sel.mode);
      for (const BoundReport* r : {&cmp.esh, &cmp.cesh, &cmp.sesh}) {
        rows.push_back(row_for(src, *r, s.label, alpha));
        failed |= r->status != SolveStatus::optimal;
      }
      if (!cmp.diagnostics.empty()) err << src.label << ":\n" << cmp.diagnostics;
      failed |= !cmp.esh_below_cesh || !cmp.sesh_equals_cesh;
    }
  }
  write_rows(out, rows, format, cfg.no_time);
  return failed ? 2 : 0;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::string format = cfg.format;
    if (format.empty()) format = cfg.command == "facets" ? "pretty" : "csv";
    if (format != "csv" && format != "json" && format != "pretty")
      throw UsageError("unknown format '" + format + "' (expected csv, json or pretty)");
    std::ofstream file;
    std::ostream* target = &out;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw UsageError("cannot write '" + cfg.out + "'");
      target = &file;
    }
    if (cfg.command == "facets") return run_facets(cfg, *target, format);
    static const std::set<std::string> graph_commands{"theta", "bound", "level", "search", "compare", "alpha"};
    if (!graph_commands.count(cfg.command)) throw UsageError("unknown command '" + cfg.command + "'");
    return run_graph_command(cfg, *target, err, format);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const GraphError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Upper bounds on the stability number from theta and exact subgraph constraints"};
  app.require_subcommand(1);

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--gen", cfg.gen, "Generator spec, e.g. paley:61, er:60:0.25:7, hamming64");
    sub->add_option("--input", cfg.input, "DIMACS or JSON graph file");
    sub->add_option("--batch", cfg.batch, "File with one generator spec or graph path per line");
    sub->add_flag("--no-alpha", cfg.no_alpha, "Skip the brute-force alpha column");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "csv, json or pretty");
    sub->add_option("--out", cfg.out, "Write the report here instead of stdout");
    sub->add_flag("--no-time", cfg.no_time, "Report zero timings for byte-stable output");
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--tol-gap", cfg.tol_gap, "Relative duality gap tolerance");
    sub->add_option("--tol-feas", cfg.tol_feas, "Relative infeasibility tolerance");
    sub->add_option("--max-iter", cfg.max_iter, "Interior-point iteration limit");
    sub->add_flag("--verbose", cfg.verbose, "Print the iteration log to stderr");
  };
  auto add_selection = [&](CLI::App* sub) {
    sub->add_option("--formulation", cfg.formulation, "esh, cesh or sesh");
    sub->add_option("--mode", cfg.mode, "lambda or facets");
    sub->add_option("--k", cfg.k, "Subset order");
    sub->add_option("--subsets", cfg.subsets, "Explicit subsets, e.g. \"1,2,3;2,4,5\"");
    sub->add_flag("--all-subsets", cfg.all_subsets, "Use every subset of order k (the default)");
    sub->add_option("--random", cfg.random_subsets, "Use this many random subsets of order k");
    sub->add_option("--seed", cfg.seed, "Seed for random subsets");
  };

  auto* theta = app.add_subcommand("theta", "Theta from both formulations with a cross-check");
  add_input(theta);
  add_output(theta);
  add_solver(theta);

  auto* bound = app.add_subcommand("bound", "Bound for a given subset selection");
  add_input(bound);
  add_output(bound);
  add_solver(bound);
  add_selection(bound);
  bound->add_option("--sdpa", cfg.sdpa, "Also write the model in sparse SDPA format");

  auto* level = app.add_subcommand("level", "Hierarchy levels for one or more k");
  add_input(level);
  add_output(level);
  add_solver(level);
  level->add_option("--formulation", cfg.formulation, "esh, cesh or sesh");
  level->add_option("--mode", cfg.mode, "lambda or facets");
  level->add_option("--k", cfg.k, "Levels to compute")->required();

  auto* search = app.add_subcommand("search", "Violated-subgraph cutting-plane search");
  add_input(search);
  add_output(search);
  add_solver(search);
  search->add_option("--formulation", cfg.formulation, "esh, cesh or sesh");
  search->add_option("--mode", cfg.mode, "lambda or facets");
  search->add_option("--k", cfg.k, "Subset order")->required();
  search->add_option("--rounds", cfg.rounds, "Separation rounds");
  search->add_option("--max-per-round", cfg.max_per_round, "Constraints added per round");
  search->add_option("--budget", cfg.budget, "Random candidates per round (default 50 n)");
  search->add_option("--tol-viol", cfg.tol_viol, "Minimum projection distance of a violated subset");
  search->add_option("--seed", cfg.seed, "Search seed");
  search->add_option("--trajectory", cfg.trajectory, "Write the per-round trajectory CSV here");

  auto* facets = app.add_subcommand("facets", "Facets of the squared stable set polytope of the edgeless graph");
  add_output(facets);
  facets->add_option("--k", cfg.k, "Orders 2..6 (default 2..5)");
  facets->add_option("--ieq", cfg.ieq, "Write the inequalities in PORTA .ieq format");
  facets->add_flag("--allow-long-running", cfg.allow_long, "Permit k=6");

  auto* compare = app.add_subcommand("compare", "ESH, CESH and SESH bounds for one selection");
  add_input(compare);
  add_output(compare);
  add_solver(compare);
  add_selection(compare);

  auto* alpha = app.add_subcommand("alpha", "Stability number by branch and bound");
  add_input(alpha);
  add_output(alpha);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  return run(cfg, out, err);
}

}  // namespace exactsub::cli
