#include "exactsub/model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "exactsub/stable_sets.hpp"

namespace exactsub {

int SdpProblem::add_nonneg(int count) {
  if (nonneg_block < 0) {
    nonneg_block = static_cast<int>(blocks.size());
    blocks.push_back({BlockKind::nonneg, 0});
  }
  const int first = blocks[static_cast<std::size_t>(nonneg_block)].dim;
  blocks[static_cast<std::size_t>(nonneg_block)].dim += count;
  return first;
}

void SdpProblem::validate() const {
  auto check = [&](const SparseEntry& e) {
    if (e.block < 0 || e.block >= static_cast<int>(blocks.size()))
      throw std::invalid_argument("entry refers to a missing block");
    const BlockSpec& b = blocks[static_cast<std::size_t>(e.block)];
    if (e.row < 0 || e.col < e.row || e.col >= b.dim)
      throw std::invalid_argument("entry outside its block or below the diagonal");
    if (b.kind == BlockKind::nonneg && e.row != e.col)
      throw std::invalid_argument("off-diagonal entry in a nonneg block");
  };
  for (const auto& e : objective) check(e);
  for (const auto& c : constraints)
    for (const auto& e : c.entries) check(e);
}

SdpProblem build_theta_nplus1(const Graph& g) {
  const int n = g.order();
  SdpProblem p;
  p.formulation = BaseFormulation::theta_nplus1;
  p.vertex_count = n;
  p.matrix_block = 0;
  p.vertex_offset = 1;
  p.blocks.push_back({BlockKind::psd, n + 1});
  p.constraints.push_back({{{0, 0, 0, 1.0}}, 1.0});
  for (int i = 1; i <= n; ++i) p.constraints.push_back({{{0, 0, i, -0.5}, {0, i, i, 1.0}}, 0.0});
  for (const Edge& e : g.edges()) p.constraints.push_back({{{0, e.u + 1, e.v + 1, 0.5}}, 0.0});
  for (int i = 1; i <= n; ++i) p.objective.push_back({0, 0, i, 0.5});
  return p;
}

SdpProblem build_theta_n(const Graph& g) {
  const int n = g.order();
  SdpProblem p;
  p.formulation = BaseFormulation::theta_n;
  p.vertex_count = n;
  p.matrix_block = 0;
  p.vertex_offset = 0;
  p.blocks.push_back({BlockKind::psd, n});
  LinearConstraint trace;
  trace.rhs = 1.0;
  for (int i = 0; i < n; ++i) trace.entries.push_back({0, i, i, 1.0});
  p.constraints.push_back(std::move(trace));
  for (const Edge& e : g.edges()) p.constraints.push_back({{{0, e.u, e.v, 0.5}}, 0.0});
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) p.objective.push_back({0, i, j, 1.0});
  return p;
}

namespace {

std::vector<LinearInequality> order_system(int k) {
  if (k == 1) return {{{{0, 0, -1}}, 0}, {{{0, 0, 1}}, 1}};
  return cached_facets_stab2_empty(k).inequalities;
}

void add_lambda_esc(SdpProblem& p, const Graph& g, const VertexSubset& subset, bool scaled) {
  const int k = subset.order();
  const auto family = enumerate_stable_sets(induced_subgraph(g, subset));
  const auto generators = scaled ? scaled_stable_set_matrices(family) : stable_set_matrices(family);
  const int t = static_cast<int>(generators.size());

  EscRecord rec;
  rec.subset = subset;
  rec.mode = EscMode::lambda;
  rec.scaled = scaled;
  rec.first_variable = p.add_nonneg(t);
  rec.variable_count = t;
  rec.first_constraint = static_cast<int>(p.constraints.size());
  rec.stable_sets.assign(family.masks().begin(), family.masks().end());
  const int nb = p.nonneg_block;

  LinearConstraint simplex;
  simplex.rhs = 1.0;
  for (int i = 0; i < t; ++i) simplex.entries.push_back({nb, rec.first_variable + i, rec.first_variable + i, 1.0});
  p.constraints.push_back(std::move(simplex));

  // X_I = sum_i lambda_i M_i on the upper triangle.
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) {
      LinearConstraint row;
      const int r = p.vertex_offset + subset[static_cast<std::size_t>(a)];
      const int c = p.vertex_offset + subset[static_cast<std::size_t>(b)];
      row.entries.push_back({p.matrix_block, r, c, a == b ? 1.0 : 0.5});
      for (int i = 0; i < t; ++i) {
        const double m = generators[static_cast<std::size_t>(i)](a, b);
        if (m != 0.0) row.entries.push_back({nb, rec.first_variable + i, rec.first_variable + i, -m});
      }
      p.constraints.push_back(std::move(row));
    }
  }
  rec.constraint_count = static_cast<int>(p.constraints.size()) - rec.first_constraint;
  p.escs.push_back(std::move(rec));
}

void add_facet_esc(SdpProblem& p, const Graph& g, const VertexSubset& subset) {
  const int k = subset.order();
  const Graph local = induced_subgraph(g, subset);
  // X_e = 0 on edges is already part of the base model, so edge terms are
  // dropped; rows that become 0 <= rhs are trivially satisfied.
  std::set<LinearInequality> rows;
  for (LinearInequality ineq : order_system(k)) {
    std::erase_if(ineq.terms, [&](const Term& t) { return t.row != t.col && local.adjacent(t.row, t.col); });
    if (ineq.terms.empty()) continue;
    rows.insert(std::move(ineq));
  }

  EscRecord rec;
  rec.subset = subset;
  rec.mode = EscMode::facets;
  rec.scaled = false;
  rec.variable_count = static_cast<int>(rows.size());
  rec.first_variable = p.add_nonneg(rec.variable_count);
  rec.first_constraint = static_cast<int>(p.constraints.size());
  int slack = rec.first_variable;
  for (const auto& ineq : rows) {
    LinearConstraint row;
    row.rhs = static_cast<double>(ineq.rhs);
    for (const Term& t : ineq.terms) {
      const int r = p.vertex_offset + subset[static_cast<std::size_t>(t.row)];
      const int c = p.vertex_offset + subset[static_cast<std::size_t>(t.col)];
      const double coeff = static_cast<double>(t.coeff);
      row.entries.push_back({p.matrix_block, r, c, t.row == t.col ? coeff : 0.5 * coeff});
    }
    row.entries.push_back({p.nonneg_block, slack, slack, 1.0});
    ++slack;
    p.constraints.push_back(std::move(row));
    rec.inequalities.push_back(ineq);
  }
  rec.constraint_count = static_cast<int>(p.constraints.size()) - rec.first_constraint;
  p.escs.push_back(std::move(rec));
}

}  // namespace

SdpProblem add_escs(SdpProblem problem, const Graph& g, const EscSelection& sel) {
  if (problem.formulation == BaseFormulation::generic)
    throw std::invalid_argument("exact subgraph constraints need a theta model");
  if (g.order() != problem.vertex_count) throw std::invalid_argument("graph does not match the model");
  if (sel.scaled && sel.mode != EscMode::lambda)
    throw std::invalid_argument("scaled constraints are only available in lambda mode");
  for (const auto& s : sel.subsets) {
    if (s.order() > 0 && s.members().back() >= g.order())
      throw std::invalid_argument("subset " + s.to_string() + " exceeds the vertex range");
    if (sel.mode == EscMode::facets && s.order() > 5)
      throw std::invalid_argument("facet mode supports subsets of order at most 5");
  }
  std::set<VertexSubset> seen;
  for (const auto& r : problem.escs) seen.insert(r.subset);
  for (const auto& s : sel.subsets) {
    if (s.order() == 0 || !seen.insert(s).second) continue;
    if (sel.mode == EscMode::lambda) {
      add_lambda_esc(problem, g, s, sel.scaled);
    } else {
      add_facet_esc(problem, g, s);
    }
  }
  return problem;
}

std::vector<VertexSubset> all_subsets(int n, int k, std::size_t cap) {
  if (k < 0 || k > n) throw std::invalid_argument("subset order outside 0..n");
  double count = 1.0;
  for (int i = 0; i < k; ++i) count = count * (n - i) / (i + 1);
  if (count > static_cast<double>(cap))
    throw ResourceLimitError("C(" + std::to_string(n) + "," + std::to_string(k) + ") subsets exceed the cap of " +
                             std::to_string(cap) + "; use the violated-subgraph search instead");
  std::vector<VertexSubset> out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    out.emplace_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

namespace {

double entry_value(const SparseEntry& e, std::span<const BlockValue> point) {
  const BlockValue& b = point[static_cast<std::size_t>(e.block)];
  if (b.matrix.size() > 0) {
    return e.row == e.col ? e.value * b.matrix(e.row, e.col)
                          : e.value * (b.matrix(e.row, e.col) + b.matrix(e.col, e.row));
  }
  return e.value * b.values(e.row);
}

}  // namespace

double evaluate_objective(const SdpProblem& problem, std::span<const BlockValue> point) {
  double s = 0.0;
  for (const auto& e : problem.objective) s += entry_value(e, point);
  return s;
}

double evaluate_constraint(const LinearConstraint& c, std::span<const BlockValue> point) {
  double s = 0.0;
  for (const auto& e : c.entries) s += entry_value(e, point);
  return s;
}

Eigen::MatrixXd vertex_matrix(const SdpProblem& problem, std::span<const BlockValue> point) {
  const auto& m = point[static_cast<std::size_t>(problem.matrix_block)].matrix;
  return m.block(problem.vertex_offset, problem.vertex_offset, problem.vertex_count, problem.vertex_count);
}

Eigen::VectorXd vertex_vector(const SdpProblem& problem, std::span<const BlockValue> point) {
  const auto& m = point[static_cast<std::size_t>(problem.matrix_block)].matrix;
  if (problem.formulation == BaseFormulation::theta_nplus1)
    return m.row(0).segment(1, problem.vertex_count).transpose();
  return m.diagonal();
}

Eigen::VectorXd esc_variables(const SdpProblem& problem, std::span<const BlockValue> point, std::size_t index) {
  const EscRecord& rec = problem.escs.at(index);
  return point[static_cast<std::size_t>(problem.nonneg_block)].values.segment(rec.first_variable,
                                                                              rec.variable_count);
}

Eigen::MatrixXd gruber_rendl_down(const Eigen::VectorXd& x, const Eigen::MatrixXd& X, double tol) {
  if (x.size() != X.rows() || X.rows() != X.cols()) throw std::invalid_argument("dimension mismatch");
  if ((X.diagonal() - x).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("diag(X) differs from x");
  const double trace = X.trace();
  if (trace <= tol) throw std::invalid_argument("trace of X is not positive");
  return X / trace;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> gruber_rendl_up(const Graph& g, const Eigen::MatrixXd& X, double tol) {
  if (X.rows() != g.order() || X.cols() != g.order()) throw std::invalid_argument("dimension mismatch");
  if (std::abs(X.trace() - 1.0) > tol) throw std::invalid_argument("trace(X) differs from 1");
  for (const Edge& e : g.edges())
    if (std::abs(X(e.u, e.v)) > tol) throw std::invalid_argument("X is nonzero on an edge");
  const Eigen::MatrixXd lifted = X.sum() * X;
  return {lifted.diagonal(), lifted};
}

}  // namespace exactsub
