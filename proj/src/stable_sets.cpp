#include "exactsub/stable_sets.hpp"

#include <algorithm>
#include <bit>

namespace exactsub {

int StableSetFamily::cardinality(std::size_t i) const { return std::popcount(masks_[i]); }

Eigen::VectorXd StableSetFamily::incidence(std::size_t i) const {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(order_);
  for (int v = 0; v < order_; ++v)
    if ((masks_[i] >> v) & 1u) s(v) = 1.0;
  return s;
}

namespace {

std::vector<std::uint64_t> neighbor_masks(const Graph& g) {
  std::vector<std::uint64_t> nb(static_cast<std::size_t>(g.order()), 0);
  for (const Edge& e : g.edges()) {
    nb[e.u] |= std::uint64_t{1} << e.v;
    nb[e.v] |= std::uint64_t{1} << e.u;
  }
  return nb;
}

}  // namespace

StableSetFamily enumerate_stable_sets(const Graph& g, std::size_t cap) {
  const int k = g.order();
  if (k > 64) throw ResourceLimitError("stable set enumeration supports at most 64 vertices");
  const auto nb = neighbor_masks(g);

  // Iterative DFS over (current set, lowest vertex still allowed, forbidden).
  std::vector<std::uint64_t> out{0};
  struct Frame {
    std::uint64_t set;
    std::uint64_t blocked;
    int next;
  };
  std::vector<Frame> stack{{0, 0, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    for (int v = k - 1; v >= f.next; --v) {
      if ((f.blocked >> v) & 1u) continue;
      const std::uint64_t set = f.set | (std::uint64_t{1} << v);
      if (out.size() >= cap)
        throw ResourceLimitError("more than " + std::to_string(cap) + " stable sets");
      out.push_back(set);
      stack.push_back({set, f.blocked | nb[v], v + 1});
    }
  }
  std::sort(out.begin(), out.end());
  return StableSetFamily(k, std::move(out));
}

namespace {

class MaxStableSearch {
 public:
  MaxStableSearch(const Graph& g, std::uint64_t node_limit)
      : g_(g), words_(g.words()), node_limit_(node_limit) {}

  int run() {
    std::vector<std::uint64_t> candidates(words_, 0);
    for (int v = 0; v < g_.order(); ++v) set(candidates, v);
    expand(0, candidates);
    return best_;
  }

 private:
  static void set(std::vector<std::uint64_t>& b, int v) { b[v >> 6] |= std::uint64_t{1} << (v & 63); }
  static void reset(std::vector<std::uint64_t>& b, int v) { b[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
  static int first(const std::vector<std::uint64_t>& b) {
    for (std::size_t w = 0; w < b.size(); ++w)
      if (b[w]) return static_cast<int>(w * 64) + std::countr_zero(b[w]);
    return -1;
  }

  // Greedy partition of the candidates into cliques of G; a stable set picks
  // at most one vertex per clique, so the class index bounds what remains.
  void cover(const std::vector<std::uint64_t>& candidates, std::vector<int>& order,
             std::vector<int>& bound) const {
    std::vector<std::uint64_t> left = candidates;
    std::vector<std::uint64_t> clique(words_);
    int cls = 0;
    while (first(left) >= 0) {
      ++cls;
      clique = left;
      for (int v = first(clique); v >= 0; v = first(clique)) {
        reset(left, v);
        order.push_back(v);
        bound.push_back(cls);
        const auto row = g_.row(v);
        for (std::size_t w = 0; w < words_; ++w) clique[w] &= row[w];
      }
    }
  }

  void expand(int size, std::vector<std::uint64_t> candidates) {
    if (++nodes_ > node_limit_)
      throw ResourceLimitError("stability number search exceeded its node limit");
    std::vector<int> order, bound;
    cover(candidates, order, bound);
    std::vector<std::uint64_t> next(words_);
    for (std::size_t idx = order.size(); idx-- > 0;) {
      if (size + bound[idx] <= best_) return;
      const int v = order[idx];
      const auto row = g_.row(v);
      for (std::size_t w = 0; w < words_; ++w) next[w] = candidates[w] & ~row[w];
      reset(next, v);
      if (first(next) < 0) {
        best_ = std::max(best_, size + 1);
      } else {
        expand(size + 1, next);
      }
      reset(candidates, v);
    }
  }

  const Graph& g_;
  std::size_t words_;
  std::uint64_t node_limit_;
  std::uint64_t nodes_ = 0;
  int best_ = 0;
};

int exhaustive(const std::vector<std::uint64_t>& nb, std::uint64_t allowed, int size) {
  if (allowed == 0) return size;
  const int v = std::countr_zero(allowed);
  const std::uint64_t rest = allowed & ~(std::uint64_t{1} << v);
  return std::max(exhaustive(nb, rest & ~nb[v], size + 1), exhaustive(nb, rest, size));
}

}  // namespace

int alpha_bruteforce(const Graph& g, std::uint64_t node_limit) {
  if (g.order() == 0) return 0;
  return MaxStableSearch(g, node_limit).run();
}

int alpha_exhaustive(const Graph& g) {
  if (g.order() > 30) throw ResourceLimitError("exhaustive stability search is limited to n <= 30");
  const auto nb = neighbor_masks(g);
  const std::uint64_t all = g.order() == 64 ? ~std::uint64_t{0}
                                            : (std::uint64_t{1} << g.order()) - 1;
  return exhaustive(nb, all, 0);
}

std::vector<Eigen::MatrixXd> stable_set_matrices(const StableSetFamily& f) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Eigen::VectorXd s = f.incidence(i);
    out.push_back(s * s.transpose());
  }
  return out;
}

std::vector<Eigen::MatrixXd> scaled_stable_set_matrices(const StableSetFamily& f) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Eigen::VectorXd s = f.incidence(i);
    const int size = f.cardinality(i);
    if (size == 0) {
      out.push_back(Eigen::MatrixXd::Zero(f.order(), f.order()));
    } else {
      out.push_back(s * s.transpose() / static_cast<double>(size));
    }
  }
  return out;
}

}  // namespace exactsub
