#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "exactsub/graph.hpp"

namespace exactsub {

struct DimacsResult {
  Graph graph;
  /// Non-fatal findings, e.g. a declared edge count that disagrees with the
  /// number of distinct edges actually listed.
  std::vector<std::string> warnings;
};

/// DIMACS edge format: `c` comment lines, one `p edge <n> <m>` line, then
/// `e <i> <j>` lines with 1-based endpoints. Throws GraphError on a missing or
/// malformed problem line, out-of-range endpoints and self-loops.
DimacsResult parse_dimacs(std::istream& in);
DimacsResult parse_dimacs(const std::string& text);
void write_dimacs(std::ostream& out, const Graph& g);

/// {"name": ..., "n": ..., "edges": [[i, j], ...]} with sorted 1-based pairs.
std::string graph_to_json(const Graph& g);
Graph graph_from_json(const std::string& text);

/// Reads `.json` files as JSON graphs and everything else as DIMACS.
/// Warnings from DIMACS parsing are appended to `warnings` when given.
Graph read_graph_file(const std::filesystem::path& path,
                      std::vector<std::string>* warnings = nullptr);

}  // namespace exactsub
