#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "exactsub/graph.hpp"

namespace exactsub {

/// Raised when an exponential computation would exceed its configured budget.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All stable sets of a graph on k <= 64 vertices, stored as bit masks
/// (bit i set iff vertex i is in the set). Members are ordered by mask value,
/// so the empty set comes first and singletons {1}, {2}, ... follow.
class StableSetFamily {
 public:
  StableSetFamily(int order, std::vector<std::uint64_t> masks)
      : order_(order), masks_(std::move(masks)) {}

  int order() const { return order_; }
  std::size_t size() const { return masks_.size(); }
  std::span<const std::uint64_t> masks() const { return masks_; }
  std::uint64_t mask(std::size_t i) const { return masks_[i]; }
  int cardinality(std::size_t i) const;
  Eigen::VectorXd incidence(std::size_t i) const;

 private:
  int order_;
  std::vector<std::uint64_t> masks_;
};

inline constexpr std::size_t kDefaultStableSetCap = std::size_t{1} << 22;

StableSetFamily enumerate_stable_sets(const Graph& g,
                                      std::size_t cap = kDefaultStableSetCap);

/// Exact stability number by branch and bound with a greedy clique-cover
/// bound. Throws ResourceLimitError after `node_limit` search nodes.
int alpha_bruteforce(const Graph& g, std::uint64_t node_limit = 2'000'000'000ULL);

/// Plain exhaustive search without bounding; second oracle for n <= 30.
int alpha_exhaustive(const Graph& g);

/// s s^T for every member; the first matrix is zero.
std::vector<Eigen::MatrixXd> stable_set_matrices(const StableSetFamily& f);

/// s s^T / (s^T s) for every nonempty member, preceded by the zero matrix.
std::vector<Eigen::MatrixXd> scaled_stable_set_matrices(const StableSetFamily& f);

}  // namespace exactsub
