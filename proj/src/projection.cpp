#include "exactsub/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace exactsub {

namespace {

// Upper triangle with off-diagonals weighted by sqrt(2), so the Euclidean
// norm of the vector is the Frobenius norm of the symmetric matrix.
Eigen::VectorXd frobenius_vec(const Eigen::MatrixXd& M) {
  const int k = static_cast<int>(M.rows());
  Eigen::VectorXd v(k * (k + 1) / 2);
  int idx = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) v(idx++) = i == j ? M(i, i) : std::sqrt(2.0) * 0.5 * (M(i, j) + M(j, i));
  return v;
}

// Minimizer of |P w| over the affine hull {sum w = 1}.
Eigen::VectorXd affine_minimizer(const Eigen::MatrixXd& P) {
  const Eigen::Index s = P.cols();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(s + 1, s + 1);
  K.topLeftCorner(s, s) = P.transpose() * P;
  K.block(0, s, s, 1).setOnes();
  K.block(s, 0, 1, s).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
  rhs(s) = 1.0;
  Eigen::VectorXd sol = K.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(s);
}

}  // namespace

MembershipResult project_onto_hull(const Eigen::MatrixXd& query,
                                   std::span<const Eigen::MatrixXd> generators,
                                   const ProjectionSettings& settings) {
  if (generators.empty()) throw std::invalid_argument("projection onto an empty hull");
  const Eigen::Index k = query.rows();
  for (const auto& g : generators)
    if (g.rows() != k || g.cols() != k) throw std::invalid_argument("generator size mismatch");

  const Eigen::VectorXd q = frobenius_vec(query);
  const Eigen::Index t = static_cast<Eigen::Index>(generators.size());
  Eigen::MatrixXd points(q.size(), t);
  for (Eigen::Index i = 0; i < t; ++i) points.col(i) = frobenius_vec(generators[i]) - q;
  const Eigen::VectorXd sq_norms = points.colwise().squaredNorm().transpose();
  const double scale = std::max(1.0, sq_norms.maxCoeff());
  constexpr double kWeightEps = 1e-12;
  constexpr double kGapEps = 1e-14;

  std::vector<Eigen::Index> active;
  Eigen::VectorXd w(1);
  Eigen::Index start = 0;
  sq_norms.minCoeff(&start);
  active.push_back(start);
  w(0) = 1.0;
  Eigen::VectorXd x = points.col(start);

  MembershipResult result;
  result.converged = false;
  int iter = 0;
  for (; iter < settings.max_iter; ++iter) {
    const double xx = x.squaredNorm();
    if (xx <= 1e-30) {
      result.converged = true;
      break;
    }
    const Eigen::VectorXd scores = points.transpose() * x;
    Eigen::Index j = 0;
    scores.minCoeff(&j);
    if (xx - scores(j) <= kGapEps * scale ||
        std::find(active.begin(), active.end(), j) != active.end()) {
      result.converged = true;
      break;
    }
    active.push_back(j);
    w.conservativeResize(w.size() + 1);
    w(w.size() - 1) = 0.0;

    for (;;) {
      Eigen::MatrixXd P(points.rows(), static_cast<Eigen::Index>(active.size()));
      for (std::size_t a = 0; a < active.size(); ++a) P.col(static_cast<Eigen::Index>(a)) = points.col(active[a]);
      const Eigen::VectorXd v = affine_minimizer(P);
      if ((v.array() > kWeightEps).all()) {
        w = v;
        break;
      }
      double theta = 1.0;
      for (Eigen::Index a = 0; a < v.size(); ++a)
        if (v(a) <= kWeightEps && w(a) - v(a) > 0) theta = std::min(theta, w(a) / (w(a) - v(a)));
      w = (1.0 - theta) * w + theta * v;
      std::vector<Eigen::Index> kept;
      std::vector<double> kept_w;
      for (std::size_t a = 0; a < active.size(); ++a)
        if (w(static_cast<Eigen::Index>(a)) > kWeightEps) {
          kept.push_back(active[a]);
          kept_w.push_back(w(static_cast<Eigen::Index>(a)));
        }
      if (kept.empty()) {  // numerical corner: restart from the best vertex
        kept.push_back(active.back());
        kept_w.push_back(1.0);
      }
      active = std::move(kept);
      w = Eigen::Map<Eigen::VectorXd>(kept_w.data(), static_cast<Eigen::Index>(kept_w.size()));
      w /= w.sum();
    }
    x.setZero();
    for (std::size_t a = 0; a < active.size(); ++a) x += w(static_cast<Eigen::Index>(a)) * points.col(active[a]);
  }

  result.iterations = iter;
  result.lambda.assign(generators.size(), 0.0);
  for (std::size_t a = 0; a < active.size(); ++a)
    result.lambda[static_cast<std::size_t>(active[a])] = w(static_cast<Eigen::Index>(a));
  Eigen::MatrixXd nearest = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (result.lambda[i] != 0.0) nearest += result.lambda[i] * generators[i];
  const Eigen::MatrixXd diff = query - nearest;
  result.distance = std::sqrt((0.5 * (diff + diff.transpose())).squaredNorm());
  result.inside = result.distance <= settings.tol_member;
  return result;
}

MembershipResult project_onto_stab2(const Eigen::MatrixXd& query, const StableSetFamily& family,
                                    bool scaled, const ProjectionSettings& settings) {
  if (query.rows() != family.order() || query.cols() != family.order())
    throw std::invalid_argument("query order does not match the stable set family");
  const auto generators = scaled ? scaled_stable_set_matrices(family) : stable_set_matrices(family);
  return project_onto_hull(query, generators, settings);
}

}  // namespace exactsub
