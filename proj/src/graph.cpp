#include "exactsub/graph.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "exactsub/rng.hpp"

namespace exactsub {

VertexSubset::VertexSubset(std::vector<int> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
    throw GraphError("vertex subset contains a repeated vertex");
  if (!members_.empty() && members_.front() < 0)
    throw GraphError("vertex subset contains a negative index");
}

bool VertexSubset::contains(int v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

std::string VertexSubset::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(members_[i] + 1);
  }
  out += '}';
  return out;
}

Graph::Graph(int n, std::span<const Edge> edges, std::string name)
    : n_(n), name_(std::move(name)) {
  if (n < 0) throw GraphError("negative vertex count");
  words_ = (static_cast<std::size_t>(n) + 63) / 64;
  adj_.assign(static_cast<std::size_t>(n) * words_, 0);
  edges_.reserve(edges.size());
  for (Edge e : edges) {
    if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u + 1));
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw GraphError("edge endpoint out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
    edges_.push_back(e);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const Edge& e : edges_) {
    adj_[static_cast<std::size_t>(e.u) * words_ + (e.v >> 6)] |= std::uint64_t{1} << (e.v & 63);
    adj_[static_cast<std::size_t>(e.v) * words_ + (e.u >> 6)] |= std::uint64_t{1} << (e.u & 63);
  }
}

Graph::Graph(int n, std::initializer_list<std::pair<int, int>> edges, std::string name) {
  std::vector<Edge> list;
  for (auto [u, v] : edges) list.push_back({u, v});
  *this = Graph(n, list, std::move(name));
}

int Graph::degree(int v) const {
  int d = 0;
  for (std::uint64_t w : row(v)) d += std::popcount(w);
  return d;
}

std::vector<int> Graph::neighbors(int v) const {
  std::vector<int> out;
  for (int u = 0; u < n_; ++u)
    if (adjacent(v, u)) out.push_back(u);
  return out;
}

Graph complement(const Graph& g) {
  std::vector<Edge> edges;
  const int n = g.order();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!g.adjacent(i, j)) edges.push_back({i, j});
  return Graph(n, edges, g.name().empty() ? std::string{} : "co-" + g.name());
}

Graph induced_subgraph(const Graph& g, const VertexSubset& subset) {
  const auto members = subset.members();
  for (int v : members)
    if (v >= g.order()) throw GraphError("subset index out of range");
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b)
      if (g.adjacent(members[a], members[b]))
        edges.push_back({static_cast<int>(a), static_cast<int>(b)});
  return Graph(subset.order(), edges);
}

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw GraphError("edge probability must lie in [0,1]");
  if (n < 0) throw GraphError("negative vertex count");
  SplitMix64 rng(seed);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < p) edges.push_back({i, j});
  return Graph(n, edges, "G_" + std::to_string(n) + "_" + std::to_string(p).substr(0, 4) +
                             "_s" + std::to_string(seed));
}

namespace {

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

}  // namespace

Graph paley(int q) {
  if (!is_prime(q) || q % 4 != 1)
    throw GraphError("Paley graph needs a prime q with q = 1 (mod 4), got " + std::to_string(q));
  std::vector<bool> residue(static_cast<std::size_t>(q), false);
  for (long long x = 1; x < q; ++x) residue[static_cast<std::size_t>(x * x % q)] = true;
  std::vector<Edge> edges;
  for (int u = 0; u < q; ++u)
    for (int v = u + 1; v < q; ++v)
      if (residue[static_cast<std::size_t>(v - u)]) edges.push_back({u, v});
  return Graph(q, edges, "Paley" + std::to_string(q));
}

Graph hamming_complement_6_4() {
  std::vector<Edge> edges;
  for (int u = 0; u < 64; ++u)
    for (int v = u + 1; v < 64; ++v) {
      const int d = std::popcount(static_cast<unsigned>(u ^ v));
      if (d >= 1 && d <= 3) edges.push_back({u, v});
    }
  return Graph(64, edges, "hamming6_4");
}

Graph circulant(int n, std::span<const int> offsets) {
  std::set<int> conn;
  for (int d : offsets) {
    if (d < 1 || d > n / 2)
      throw GraphError("circulant offset " + std::to_string(d) + " outside 1.." +
                       std::to_string(n / 2));
    if (!conn.insert(d).second) throw GraphError("repeated circulant offset");
  }
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (conn.count(std::min(v - u, n - (v - u)))) edges.push_back({u, v});
  return Graph(n, edges, "Circulant" + std::to_string(n));
}

Graph empty_graph(int n) { return Graph(n, std::span<const Edge>{}, "empty" + std::to_string(n)); }

Graph complete_graph(int n) {
  Graph g = complement(empty_graph(n));
  g.set_name("K" + std::to_string(n));
  return g;
}

Graph cycle_graph(int n) {
  if (n < 3) throw GraphError("a cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return Graph(n, edges, "C" + std::to_string(n));
}

Graph path_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Graph(n, edges, "P" + std::to_string(n));
}

}  // namespace exactsub
