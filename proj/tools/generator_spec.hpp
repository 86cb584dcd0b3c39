#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "exactsub/graph.hpp"

namespace exactsub::cli {

/// Bad command line input; maps to exit status 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds a graph from a generator spec:
///   paley:<q>                  Paley graph on q vertices
///   er:<n>:<p>:<seed>          Erdos-Renyi G(n, p) from SplitMix64(seed)
///   hamming64                  complement of the hamming6-4 clique instance
///   circulant:<n>:<d1,d2,...>  circulant graph with the given offsets
///   cycle:<n> path:<n> empty:<n> complete:<n>
///   complement:<path>          complement of a DIMACS or JSON graph file
Graph parse_generator_spec(const std::string& spec);

/// Reads a graph file (DIMACS, or JSON when the name ends in .json).
/// Parser warnings are appended to `warnings` when given.
Graph load_graph_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

}  // namespace exactsub::cli
