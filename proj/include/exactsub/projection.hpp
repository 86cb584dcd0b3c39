#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "exactsub/stable_sets.hpp"

namespace exactsub {

/// Nearest point of a polytope conv{M_i} to a query matrix.
struct MembershipResult {
  bool inside = false;
  /// Frobenius distance from the query to the polytope.
  double distance = 0.0;
  /// Convex weights of the nearest point, indexed like the generators.
  std::vector<double> lambda;
  int iterations = 0;
  /// False when the iteration cap was hit; the fields then hold the best
  /// point found so far.
  bool converged = true;
};

struct ProjectionSettings {
  /// Query counts as inside when its distance is at most this.
  double tol_member = 1e-7;
  int max_iter = 5000;
};

/// Projects `query` onto the convex hull of `generators` (all k x k, k <= 12)
/// with Wolfe's minimum-norm-point algorithm in the Frobenius geometry.
MembershipResult project_onto_hull(const Eigen::MatrixXd& query,
                                   std::span<const Eigen::MatrixXd> generators,
                                   const ProjectionSettings& settings = {});

/// Projection onto STAB^2 (scaled = false) or SSTAB^2 (scaled = true) of the
/// graph whose stable sets are `family`.
MembershipResult project_onto_stab2(const Eigen::MatrixXd& query,
                                    const StableSetFamily& family, bool scaled,
                                    const ProjectionSettings& settings = {});

}  // namespace exactsub
