#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace exactsub::cli {

struct RunConfig {
  std::string command;
  std::string gen;
  std::string input;
  std::string batch;

  std::string formulation = "esh";
  std::string mode = "lambda";
  std::vector<int> k;
  /// Explicit J: 1-based subsets separated by ';', members by ','.
  std::string subsets;
  bool all_subsets = false;
  int random_subsets = 0;

  int rounds = 10;
  int max_per_round = 200;
  int budget = 0;
  double tol_viol = 1e-4;
  std::uint64_t seed = 1;

  /// csv, json or pretty; empty picks pretty for `facets` and csv otherwise.
  std::string format;
  std::string out;
  bool no_time = false;
  bool no_alpha = false;
  std::string trajectory;
  std::string ieq;
  std::string sdpa;
  bool allow_long = false;

  double tol_gap = 1e-7;
  double tol_feas = 1e-7;
  int max_iter = 200;
  bool verbose = false;
};

/// Parses argv and runs the command. Returns 0 on success, 1 on usage
/// errors and 2 when a solve fails or a consistency check does not hold.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs an already parsed configuration.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace exactsub::cli
