#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exactsub {

/// Raised for malformed graph input and invalid generator arguments.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected edge {u, v} with u < v. Vertices are 0-based inside the
/// library; every reader, writer and report converts to 1-based labels.
struct Edge {
  int u = 0;
  int v = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Sorted set of distinct vertices (0-based).
class VertexSubset {
 public:
  VertexSubset() = default;
  explicit VertexSubset(std::vector<int> members);
  VertexSubset(std::initializer_list<int> members)
      : VertexSubset(std::vector<int>(members)) {}

  std::span<const int> members() const { return members_; }
  int order() const { return static_cast<int>(members_.size()); }
  int operator[](std::size_t i) const { return members_[i]; }
  bool contains(int v) const;

  /// "{1,3,4}" with 1-based labels.
  std::string to_string() const;

  auto operator<=>(const VertexSubset&) const = default;

 private:
  std::vector<int> members_;
};

/// Simple undirected graph. Immutable after construction.
class Graph {
 public:
  Graph() = default;
  /// Edges are 0-based; pairs may come in any orientation and duplicates are
  /// merged. Self-loops and out-of-range endpoints throw GraphError.
  Graph(int n, std::span<const Edge> edges, std::string name = {});
  Graph(int n, std::initializer_list<std::pair<int, int>> edges,
        std::string name = {});

  int order() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  bool adjacent(int u, int v) const {
    return (adj_[static_cast<std::size_t>(u) * words_ + (v >> 6)] >> (v & 63)) & 1u;
  }
  /// Adjacency row as a bitset of `words()` 64-bit words.
  std::span<const std::uint64_t> row(int v) const {
    return {adj_.data() + static_cast<std::size_t>(v) * words_, words_};
  }
  std::size_t words() const { return words_; }
  int degree(int v) const;
  std::vector<int> neighbors(int v) const;

  /// Structural equality (vertex count and edge set; the name is ignored).
  bool operator==(const Graph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::string name_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> adj_;
};

Graph complement(const Graph& g);

/// Restriction to `subset`, relabeled 0..k-1 in the sorted order of subset.
Graph induced_subgraph(const Graph& g, const VertexSubset& subset);

/// G(n, p) with SplitMix64 seeded by `seed`; pairs visited lexicographically.
Graph erdos_renyi(int n, double p, std::uint64_t seed);

/// Paley graph on the residues mod q; q must be a prime with q = 1 (mod 4).
Graph paley(int q);

/// Binary words of length 6, adjacent iff their Hamming distance is 1, 2 or 3
/// (the complement of the DIMACS clique instance hamming6-4).
Graph hamming_complement_6_4();

/// u ~ v iff the circular distance min(|u-v|, n-|u-v|) is in `offsets`.
Graph circulant(int n, std::span<const int> offsets);

Graph empty_graph(int n);
Graph complete_graph(int n);
Graph cycle_graph(int n);
Graph path_graph(int n);

}  // namespace exactsub
