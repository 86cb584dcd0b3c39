#include "exactsub/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace exactsub {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::infeasible_suspect: return "infeasible_suspect";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

void write_iteration_log(std::ostream& out, const IterationRecord& rec) {
  out << std::setw(4) << rec.iter << std::scientific << std::setprecision(3) << "  mu " << rec.mu << "  gap "
      << rec.gap << "  pres " << rec.primal_residual << "  dres " << rec.dual_residual << std::fixed
      << std::setprecision(3) << "  step_p " << rec.step_primal << "  step_d " << rec.step_dual << '\n';
  out.unsetf(std::ios::floatfield);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Rows touching more than this many entries of a PSD block get the dense
// Schur complement path. When the block is small compared with the number of
// rows, every row does.
constexpr int kDenseRowTerms = 24;

struct FullTerm {
  int p;
  int q;
  double v;
};

struct RowPart {
  int row;
  int begin;
  int end;
  bool dense;
};

struct PsdData {
  int block = 0;
  int dim = 0;
  std::vector<FullTerm> terms;
  std::vector<RowPart> rows;
  Eigen::MatrixXd cost;  // minimization form: -C
};

// Linear algebra view of the problem after dropping repeated rows.
struct Workspace {
  std::vector<int> active;
  std::vector<int> dropped;
  Eigen::VectorXd b;
  std::vector<PsdData> psd;
  std::vector<int> psd_index;  // problem block -> psd position or -1
  std::vector<int> lp_offset;  // problem block -> offset in the lp vector or -1
  int lp_dim = 0;
  std::vector<std::vector<std::pair<int, double>>> lp_columns;
  Eigen::VectorXd lp_cost;
  int cone_dim = 0;
  double norm_b = 0.0;
  double norm_c = 0.0;
};

std::vector<SparseEntry> normalized_entries(std::vector<SparseEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const SparseEntry& a, const SparseEntry& b) {
    return std::tie(a.block, a.row, a.col) < std::tie(b.block, b.row, b.col);
  });
  std::vector<SparseEntry> merged;
  for (const auto& e : entries) {
    if (!merged.empty() && merged.back().block == e.block && merged.back().row == e.row &&
        merged.back().col == e.col) {
      merged.back().value += e.value;
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [](const SparseEntry& e) { return e.value == 0.0; });
  return merged;
}

Workspace build_workspace(const SdpProblem& problem) {
  problem.validate();
  Workspace ws;
  std::map<std::vector<double>, int> seen;
  std::vector<std::vector<SparseEntry>> rows;
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    auto entries = normalized_entries(problem.constraints[i].entries);
    const double rhs = problem.constraints[i].rhs;
    if (entries.empty()) {
      if (rhs != 0.0) throw std::invalid_argument("constraint without entries has a nonzero right-hand side");
      ws.dropped.push_back(static_cast<int>(i));
      continue;
    }
    const double scale = entries.front().value;
    std::vector<double> key;
    key.reserve(entries.size() * 4 + 1);
    for (const auto& e : entries) {
      key.push_back(e.block);
      key.push_back(e.row);
      key.push_back(e.col);
      key.push_back(e.value / scale);
    }
    key.push_back(rhs / scale);
    if (!seen.emplace(std::move(key), static_cast<int>(i)).second) {
      ws.dropped.push_back(static_cast<int>(i));
      continue;
    }
    ws.active.push_back(static_cast<int>(i));
    rows.push_back(std::move(entries));
  }
  const int m = static_cast<int>(ws.active.size());
  ws.b.resize(m);
  for (int i = 0; i < m; ++i) ws.b(i) = problem.constraints[static_cast<std::size_t>(ws.active[i])].rhs;

  ws.psd_index.assign(problem.blocks.size(), -1);
  ws.lp_offset.assign(problem.blocks.size(), -1);
  for (std::size_t k = 0; k < problem.blocks.size(); ++k) {
    const auto& blk = problem.blocks[k];
    if (blk.kind == BlockKind::psd) {
      ws.psd_index[k] = static_cast<int>(ws.psd.size());
      PsdData d;
      d.block = static_cast<int>(k);
      d.dim = blk.dim;
      d.cost = Eigen::MatrixXd::Zero(blk.dim, blk.dim);
      ws.psd.push_back(std::move(d));
    } else {
      ws.lp_offset[k] = ws.lp_dim;
      ws.lp_dim += blk.dim;
    }
    ws.cone_dim += blk.dim;
  }
  ws.lp_columns.resize(static_cast<std::size_t>(ws.lp_dim));
  ws.lp_cost = Eigen::VectorXd::Zero(ws.lp_dim);

  for (const auto& e : normalized_entries(problem.objective)) {
    if (ws.psd_index[e.block] >= 0) {
      auto& c = ws.psd[static_cast<std::size_t>(ws.psd_index[e.block])].cost;
      c(e.row, e.col) -= e.value;
      if (e.row != e.col) c(e.col, e.row) -= e.value;
    } else {
      ws.lp_cost(ws.lp_offset[e.block] + e.row) -= e.value;
    }
  }

  for (int i = 0; i < m; ++i) {
    for (auto& d : ws.psd) {
      RowPart part{i, static_cast<int>(d.terms.size()), 0, false};
      for (const auto& e : rows[static_cast<std::size_t>(i)]) {
        if (e.block != d.block) continue;
        d.terms.push_back({e.row, e.col, e.value});
        if (e.row != e.col) d.terms.push_back({e.col, e.row, e.value});
      }
      part.end = static_cast<int>(d.terms.size());
      if (part.end > part.begin) {
        part.dense = part.end - part.begin > kDenseRowTerms;
        d.rows.push_back(part);
      }
    }
    for (const auto& e : rows[static_cast<std::size_t>(i)])
      if (ws.lp_offset[e.block] >= 0)
        ws.lp_columns[static_cast<std::size_t>(ws.lp_offset[e.block] + e.row)].push_back({i, e.value});
  }
  for (auto& d : ws.psd) {
    const double avg_terms = d.rows.empty() ? 0.0 : static_cast<double>(d.terms.size()) / d.rows.size();
    if (static_cast<double>(d.dim) * d.dim < 0.5 * avg_terms * static_cast<double>(d.rows.size()))
      for (auto& part : d.rows) part.dense = true;
  }
  ws.norm_b = ws.b.norm();
  double c2 = ws.lp_cost.squaredNorm();
  for (const auto& d : ws.psd) c2 += d.cost.squaredNorm();
  ws.norm_c = std::sqrt(c2);
  return ws;
}

struct Iterate {
  std::vector<Eigen::MatrixXd> X, Z;
  Eigen::VectorXd x, z;  // nonneg part
  Eigen::VectorXd y;     // minimization-form multipliers
};

struct Direction {
  std::vector<Eigen::MatrixXd> dX, dZ;
  Eigen::VectorXd dx, dz, dy;
};

// <A_i, M> for a possibly unsymmetric M: sum over full terms of v * M(q, p).
double apply_row(const PsdData& d, const RowPart& part, const Eigen::MatrixXd& M) {
  double s = 0.0;
  for (int t = part.begin; t < part.end; ++t) {
    const FullTerm& ft = d.terms[static_cast<std::size_t>(t)];
    s += ft.v * M(ft.q, ft.p);
  }
  return s;
}

Eigen::VectorXd apply_operator(const Workspace& ws, const std::vector<Eigen::MatrixXd>& M, const Eigen::VectorXd& v) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ws.active.size()));
  for (std::size_t k = 0; k < ws.psd.size(); ++k)
    for (const auto& part : ws.psd[k].rows) out(part.row) += apply_row(ws.psd[k], part, M[k]);
  for (int j = 0; j < ws.lp_dim; ++j)
    for (auto [row, a] : ws.lp_columns[static_cast<std::size_t>(j)]) out(row) += a * v(j);
  return out;
}

// Adds -sum_i y_i A_i to the blocks.
void subtract_adjoint(const Workspace& ws, const Eigen::VectorXd& y, std::vector<Eigen::MatrixXd>& M,
                      Eigen::VectorXd& v) {
  for (std::size_t k = 0; k < ws.psd.size(); ++k) {
    const auto& d = ws.psd[k];
    for (const auto& part : d.rows) {
      const double yi = y(part.row);
      if (yi == 0.0) continue;
      for (int t = part.begin; t < part.end; ++t) {
        const FullTerm& ft = d.terms[static_cast<std::size_t>(t)];
        M[k](ft.p, ft.q) -= yi * ft.v;
      }
    }
  }
  for (int j = 0; j < ws.lp_dim; ++j)
    for (auto [row, a] : ws.lp_columns[static_cast<std::size_t>(j)]) v(j) -= a * y(row);
}

double max_step_psd(const Eigen::MatrixXd& X, const Eigen::MatrixXd& dX) {
  if (X.rows() == 0) return kInf;
  Eigen::LLT<Eigen::MatrixXd> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  Eigen::MatrixXd W = llt.matrixL().solve(dX);
  W = llt.matrixL().solve(W.transpose().eval());
  W = 0.5 * (W + W.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(W, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  return lmin >= 0.0 ? kInf : -1.0 / lmin;
}

double max_step_lp(const Eigen::VectorXd& x, const Eigen::VectorXd& dx) {
  double step = kInf;
  for (Eigen::Index j = 0; j < x.size(); ++j)
    if (dx(j) < 0.0) step = std::min(step, -x(j) / dx(j));
  return step;
}

double inner(const std::vector<Eigen::MatrixXd>& A, const std::vector<Eigen::MatrixXd>& B, const Eigen::VectorXd& a,
             const Eigen::VectorXd& b) {
  double s = a.dot(b);
  for (std::size_t k = 0; k < A.size(); ++k) s += A[k].cwiseProduct(B[k]).sum();
  return s;
}

class InteriorPoint {
 public:
  InteriorPoint(const Workspace& ws, const SolverSettings& settings) : ws_(ws), set_(settings) {
    m_ = static_cast<Eigen::Index>(ws.active.size());
  }

  Solution run(const SdpProblem& problem);

 private:
  struct Measures {
    double pobj, dobj, mu, gap, pinf, dinf;
  };

  void initialize();
  Measures measure();
  bool assemble_and_factor();
  void solve_direction(const std::vector<Eigen::MatrixXd>& Rc, const Eigen::VectorXd& rc, Direction& dir);
  Solution package(const SdpProblem& problem, const Iterate& it, SolveStatus status, int iterations);

  const Workspace& ws_;
  const SolverSettings& set_;
  Eigen::Index m_ = 0;
  Iterate it_;
  std::vector<Eigen::MatrixXd> Zinv_, Rd_, XRdZi_;
  Eigen::VectorXd rd_, rp_;
  Eigen::MatrixXd schur_, factor_;
  std::optional<Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>>> llt_;
  std::vector<IterationRecord> history_;
};

void InteriorPoint::initialize() {
  double max_b = 0.0;
  for (Eigen::Index i = 0; i < ws_.b.size(); ++i) max_b = std::max(max_b, std::abs(ws_.b(i)));
  const double tau = 1.0 + max_b;
  for (const auto& d : ws_.psd) {
    it_.X.push_back(tau * Eigen::MatrixXd::Identity(d.dim, d.dim));
    it_.Z.push_back(tau * Eigen::MatrixXd::Identity(d.dim, d.dim));
  }
  it_.x = Eigen::VectorXd::Constant(ws_.lp_dim, tau);
  it_.z = Eigen::VectorXd::Constant(ws_.lp_dim, tau);
  it_.y = Eigen::VectorXd::Zero(m_);
}

InteriorPoint::Measures InteriorPoint::measure() {
  Measures ms{};
  // Primal residual b - A(X).
  rp_ = ws_.b - apply_operator(ws_, it_.X, it_.x);
  // Dual residual C' - A^T y - Z.
  Rd_.resize(ws_.psd.size());
  for (std::size_t k = 0; k < ws_.psd.size(); ++k) Rd_[k] = ws_.psd[k].cost - it_.Z[k];
  rd_ = ws_.lp_cost - it_.z;
  subtract_adjoint(ws_, it_.y, Rd_, rd_);

  double cx = ws_.lp_cost.dot(it_.x);
  for (std::size_t k = 0; k < ws_.psd.size(); ++k) cx += ws_.psd[k].cost.cwiseProduct(it_.X[k]).sum();
  ms.pobj = -cx;
  ms.dobj = -ws_.b.dot(it_.y);
  const double xz = inner(it_.X, it_.Z, it_.x, it_.z);
  ms.mu = xz / std::max(1, ws_.cone_dim);
  const double scale = std::max(1.0, 0.5 * (std::abs(ms.pobj) + std::abs(ms.dobj)));
  ms.gap = std::max(std::abs(ms.pobj - ms.dobj), xz) / scale;
  ms.pinf = rp_.norm() / (1.0 + ws_.norm_b);
  double rd2 = rd_.squaredNorm();
  for (const auto& R : Rd_) rd2 += R.squaredNorm();
  ms.dinf = std::sqrt(rd2) / (1.0 + ws_.norm_c);
  return ms;
}

bool InteriorPoint::assemble_and_factor() {
  schur_.setZero(m_, m_);
  Zinv_.resize(ws_.psd.size());
  for (std::size_t k = 0; k < ws_.psd.size(); ++k) {
    Eigen::LLT<Eigen::MatrixXd> llt(it_.Z[k]);
    if (llt.info() != Eigen::Success) return false;
    Zinv_[k] = llt.solve(Eigen::MatrixXd::Identity(ws_.psd[k].dim, ws_.psd[k].dim));
    Zinv_[k] = 0.5 * (Zinv_[k] + Zinv_[k].transpose()).eval();
  }

  for (std::size_t k = 0; k < ws_.psd.size(); ++k) {
    const auto& d = ws_.psd[k];
    const Eigen::MatrixXd& X = it_.X[k];
    const Eigen::MatrixXd& Zi = Zinv_[k];
    for (std::size_t a = 0; a < d.rows.size(); ++a) {
      const RowPart& ra = d.rows[a];
      if (!ra.dense) continue;
      // H = X A_i Z^{-1}; M_ij = sum over terms (r, s, w) of A_j of w H(r, s).
      Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d.dim, d.dim);
      for (int t = ra.begin; t < ra.end; ++t) {
        const FullTerm& ft = d.terms[static_cast<std::size_t>(t)];
        H.noalias() += ft.v * X.col(ft.p) * Zi.row(ft.q);
      }
      for (const RowPart& rb : d.rows) {
        if (rb.dense && rb.row < ra.row) continue;
        double s = 0.0;
        for (int t = rb.begin; t < rb.end; ++t) {
          const FullTerm& ft = d.terms[static_cast<std::size_t>(t)];
          s += ft.v * H(ft.p, ft.q);
        }
        schur_(std::max(ra.row, rb.row), std::min(ra.row, rb.row)) += s;
      }
    }
    for (std::size_t a = 0; a < d.rows.size(); ++a) {
      const RowPart& ra = d.rows[a];
      if (ra.dense) continue;
      for (std::size_t b = a; b < d.rows.size(); ++b) {
        const RowPart& rb = d.rows[b];
        if (rb.dense) continue;
        double s = 0.0;
        for (int t = ra.begin; t < ra.end; ++t) {
          const FullTerm& f = d.terms[static_cast<std::size_t>(t)];
          for (int u = rb.begin; u < rb.end; ++u) {
            const FullTerm& g = d.terms[static_cast<std::size_t>(u)];
            s += f.v * g.v * X(f.q, g.p) * Zi(g.q, f.p);
          }
        }
        schur_(rb.row, ra.row) += s;
      }
    }
  }
  for (int j = 0; j < ws_.lp_dim; ++j) {
    const double ratio = it_.x(j) / it_.z(j);
    const auto& col = ws_.lp_columns[static_cast<std::size_t>(j)];
    for (std::size_t a = 0; a < col.size(); ++a)
      for (std::size_t b = 0; b < col.size(); ++b)
        if (col[b].first >= col[a].first) schur_(col[b].first, col[a].first) += ratio * col[a].second * col[b].second;
  }

  // Plain Cholesky first; on breakdown every diagonal entry is inflated by
  // 1e-12 of itself (plus a floor tied to the largest one), escalating x10
  // for at most 3 retries.
  const double max_diag = std::max(1.0, schur_.diagonal().maxCoeff());
  double reg = 1e-12;
  for (int attempt = 0; attempt < 4; ++attempt) {
    factor_.resize(m_, m_);
    factor_.triangularView<Eigen::Lower>() = schur_.triangularView<Eigen::Lower>();
    if (attempt > 0) {
      factor_.diagonal().array() += reg * (schur_.diagonal().array().abs() + 1e-4 * max_diag);
      reg *= 10.0;
    }
    llt_.emplace(factor_);
    if (llt_->info() == Eigen::Success) return true;
  }
  return false;
}

void InteriorPoint::solve_direction(const std::vector<Eigen::MatrixXd>& Rc, const Eigen::VectorXd& rc,
                                    Direction& dir) {
  // M dy = rp - A(Rc Z^{-1}) + A(X Rd Z^{-1})
  std::vector<Eigen::MatrixXd> RcZi(ws_.psd.size());
  for (std::size_t k = 0; k < ws_.psd.size(); ++k) RcZi[k] = Rc[k] * Zinv_[k];
  const Eigen::VectorXd rcz = rc.cwiseQuotient(it_.z);
  const Eigen::VectorXd xrdz = it_.x.cwiseProduct(rd_).cwiseQuotient(it_.z);
  Eigen::VectorXd rhs = rp_ - apply_operator(ws_, RcZi, rcz) + apply_operator(ws_, XRdZi_, xrdz);
  dir.dy = llt_->solve(rhs);
  for (int refine = 0; refine < 2; ++refine) {
    const Eigen::VectorXd r = rhs - schur_.selfadjointView<Eigen::Lower>() * dir.dy;
    if (r.norm() <= 1e-15 * rhs.norm()) break;
    dir.dy += llt_->solve(r);
  }

  dir.dZ = Rd_;
  dir.dz = rd_;
  subtract_adjoint(ws_, dir.dy, dir.dZ, dir.dz);
  dir.dX.resize(ws_.psd.size());
  for (std::size_t k = 0; k < ws_.psd.size(); ++k) {
    Eigen::MatrixXd dX = (Rc[k] - it_.X[k] * dir.dZ[k]) * Zinv_[k];
    dir.dX[k] = 0.5 * (dX + dX.transpose());
  }
  dir.dx = (rc - it_.x.cwiseProduct(dir.dz)).cwiseQuotient(it_.z);
}

Solution InteriorPoint::package(const SdpProblem& problem, const Iterate& it, SolveStatus status, int iterations) {
  Solution sol;
  sol.status = status;
  sol.iterations = iterations;
  sol.primal.resize(problem.blocks.size());
  sol.dual_slack.resize(problem.blocks.size());
  for (std::size_t k = 0; k < problem.blocks.size(); ++k) {
    if (ws_.psd_index[k] >= 0) {
      sol.primal[k].matrix = it.X[static_cast<std::size_t>(ws_.psd_index[k])];
      sol.dual_slack[k].matrix = it.Z[static_cast<std::size_t>(ws_.psd_index[k])];
    } else {
      sol.primal[k].values = it.x.segment(ws_.lp_offset[k], problem.blocks[k].dim);
      sol.dual_slack[k].values = it.z.segment(ws_.lp_offset[k], problem.blocks[k].dim);
    }
  }
  sol.dual_y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(problem.constraints.size()));
  for (Eigen::Index i = 0; i < m_; ++i) sol.dual_y(ws_.active[static_cast<std::size_t>(i)]) = -it.y(i);
  sol.dropped_constraints = ws_.dropped;
  sol.history = history_;
  return sol;
}

Solution InteriorPoint::run(const SdpProblem& problem) {
  initialize();
  SolveStatus status = SolveStatus::max_iter;
  Iterate best = it_;
  double best_merit = kInf;
  Measures best_ms{};
  double step_p = 0.0, step_d = 0.0;
  int stalls = 0;
  int iter = 0;
  const double data_scale = 1.0 + ws_.norm_b + ws_.norm_c;

  for (;; ++iter) {
    const Measures ms = measure();
    IterationRecord rec{iter, ms.mu, ms.gap, ms.pinf, ms.dinf, step_p, step_d, ms.pobj, ms.dobj};
    history_.push_back(rec);
    if (set_.log) write_iteration_log(*set_.log, rec);
    const double merit = std::max({ms.gap / set_.tol_gap, ms.pinf / set_.tol_feas, ms.dinf / set_.tol_feas});
    if (merit < best_merit) {
      best_merit = merit;
      best = it_;
      best_ms = ms;
    }
    if (merit <= 1.0) {
      status = SolveStatus::optimal;
      break;
    }
    if (iter >= set_.max_iter) {
      status = SolveStatus::max_iter;
      break;
    }
    if (std::abs(ms.dobj) > 1e10 * data_scale || std::abs(ms.pobj) > 1e10 * data_scale) {
      status = SolveStatus::infeasible_suspect;
      break;
    }

    if (!assemble_and_factor()) {
      status = SolveStatus::numerical_failure;
      break;
    }
    XRdZi_.resize(ws_.psd.size());
    for (std::size_t k = 0; k < ws_.psd.size(); ++k) XRdZi_[k] = it_.X[k] * Rd_[k] * Zinv_[k];

    // Predictor (affine scaling) direction.
    std::vector<Eigen::MatrixXd> Rc(ws_.psd.size());
    for (std::size_t k = 0; k < ws_.psd.size(); ++k) Rc[k] = -it_.X[k] * it_.Z[k];
    Eigen::VectorXd rc = -it_.x.cwiseProduct(it_.z);
    Direction aff;
    solve_direction(Rc, rc, aff);
    double ap = max_step_lp(it_.x, aff.dx), ad = max_step_lp(it_.z, aff.dz);
    for (std::size_t k = 0; k < ws_.psd.size(); ++k) {
      ap = std::min(ap, max_step_psd(it_.X[k], aff.dX[k]));
      ad = std::min(ad, max_step_psd(it_.Z[k], aff.dZ[k]));
    }
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double mu_aff = (it_.x + ap * aff.dx).dot(it_.z + ad * aff.dz);
    for (std::size_t k = 0; k < ws_.psd.size(); ++k)
      mu_aff += (it_.X[k] + ap * aff.dX[k]).cwiseProduct(it_.Z[k] + ad * aff.dZ[k]).sum();
    mu_aff /= std::max(1, ws_.cone_dim);
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / ms.mu, 3.0), 0.0, 1.0);

    // Corrector with the second-order term.
    for (std::size_t k = 0; k < ws_.psd.size(); ++k) {
      Rc[k] = -it_.X[k] * it_.Z[k] - aff.dX[k] * aff.dZ[k];
      Rc[k].diagonal().array() += sigma * ms.mu;
    }
    rc = -it_.x.cwiseProduct(it_.z) - aff.dx.cwiseProduct(aff.dz);
    rc.array() += sigma * ms.mu;
    Direction dir;
    solve_direction(Rc, rc, dir);
    ap = max_step_lp(it_.x, dir.dx);
    ad = max_step_lp(it_.z, dir.dz);
    for (std::size_t k = 0; k < ws_.psd.size(); ++k) {
      ap = std::min(ap, max_step_psd(it_.X[k], dir.dX[k]));
      ad = std::min(ad, max_step_psd(it_.Z[k], dir.dZ[k]));
    }
    step_p = std::min(1.0, set_.step_frac * ap);
    step_d = std::min(1.0, set_.step_frac * ad);

    // Unequal step lengths can raise <X, Z> through the cross term. When it
    // would grow by more than 5%, equalize the steps, then shorten both.
    double xdz = it_.x.dot(dir.dz), dxz = dir.dx.dot(it_.z), dxdz = dir.dx.dot(dir.dz);
    for (std::size_t k = 0; k < ws_.psd.size(); ++k) {
      xdz += it_.X[k].cwiseProduct(dir.dZ[k]).sum();
      dxz += dir.dX[k].cwiseProduct(it_.Z[k]).sum();
      dxdz += dir.dX[k].cwiseProduct(dir.dZ[k]).sum();
    }
    const double slack = 0.05 * ms.mu * std::max(1, ws_.cone_dim);
    const auto grows = [&](double p, double d) { return p * dxz + d * xdz + p * d * dxdz > slack; };
    if (grows(step_p, step_d)) {
      const double equal = std::min(step_p, step_d);
      double shrink = 1.0;
      for (int tries = 0; tries < 10 && grows(equal * shrink, equal * shrink); ++tries) shrink *= 0.7;
      if (!grows(equal * shrink, equal * shrink)) step_p = step_d = equal * shrink;
    }

    for (std::size_t k = 0; k < ws_.psd.size(); ++k) {
      it_.X[k] += step_p * dir.dX[k];
      it_.Z[k] += step_d * dir.dZ[k];
    }
    it_.x += step_p * dir.dx;
    it_.z += step_d * dir.dz;
    it_.y += step_d * dir.dy;

    stalls = (step_p < 1e-8 && step_d < 1e-8) ? stalls + 1 : 0;
    if (stalls >= 3) {
      status = SolveStatus::numerical_failure;
      break;
    }
  }
  llt_.reset();

  // On success the best iterate is the last one.
  Solution sol = package(problem, best, status, iter);
  sol.objective = best_ms.pobj;
  sol.dual_objective = best_ms.dobj;
  sol.gap = best_ms.gap;
  sol.primal_residual = best_ms.pinf;
  sol.dual_residual = best_ms.dinf;
  return sol;
}

}  // namespace

Solution solve(const SdpProblem& problem, const SolverSettings& settings) {
  if (!(settings.tol_gap > 0 && settings.tol_feas > 0 && settings.step_frac > 0 && settings.step_frac < 1))
    throw std::invalid_argument("solver tolerances must be positive and 0 < step_frac < 1");
  const auto start = std::chrono::steady_clock::now();
  const Workspace ws = build_workspace(problem);
  InteriorPoint ipm(ws, settings);
  Solution sol = ipm.run(problem);
  sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

namespace {

long double entry_product(const SparseEntry& e, const BlockValue& b) {
  if (b.matrix.size() > 0) {
    const long double m = e.row == e.col ? b.matrix(e.row, e.col)
                                         : static_cast<long double>(b.matrix(e.row, e.col)) + b.matrix(e.col, e.row);
    return static_cast<long double>(e.value) * m;
  }
  return static_cast<long double>(e.value) * b.values(e.row);
}

double cone_min(const SdpProblem& problem, std::span<const BlockValue> point) {
  double lo = kInf;
  for (std::size_t k = 0; k < problem.blocks.size(); ++k) {
    const auto& blk = problem.blocks[k];
    if (blk.dim == 0) continue;
    if (blk.kind == BlockKind::psd) {
      const Eigen::MatrixXd S = 0.5 * (point[k].matrix + point[k].matrix.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S, Eigen::EigenvaluesOnly);
      lo = std::min(lo, eig.eigenvalues().minCoeff());
    } else {
      lo = std::min(lo, point[k].values.minCoeff());
    }
  }
  return lo == kInf ? 0.0 : lo;
}

}  // namespace

ResidualReport check_primal(const SdpProblem& problem, std::span<const BlockValue> point, double flag_tol) {
  ResidualReport rep;
  long double sq = 0, bsq = 0, worst = -1;
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const auto& c = problem.constraints[i];
    long double lhs = 0;
    for (const auto& e : c.entries) lhs += entry_product(e, point[static_cast<std::size_t>(e.block)]);
    const long double r = lhs - c.rhs;
    const long double a = r < 0 ? -r : r;
    sq += r * r;
    bsq += static_cast<long double>(c.rhs) * c.rhs;
    if (a > worst) {
      worst = a;
      rep.worst_constraint = static_cast<int>(i);
    }
    if (a > flag_tol * (1.0 + std::abs(c.rhs))) rep.violated.push_back(static_cast<int>(i));
  }
  rep.primal_max = static_cast<double>(std::max<long double>(worst, 0));
  rep.primal_relative = static_cast<double>(std::sqrt(sq) / (1 + std::sqrt(bsq)));
  long double obj = 0;
  for (const auto& e : problem.objective) obj += entry_product(e, point[static_cast<std::size_t>(e.block)]);
  rep.objective = static_cast<double>(obj);
  rep.primal_cone_min = cone_min(problem, point);
  return rep;
}

ResidualReport check_solution(const SdpProblem& problem, const Solution& solution, double flag_tol) {
  ResidualReport rep = check_primal(problem, solution.primal, flag_tol);
  if (solution.dual_slack.size() != problem.blocks.size() ||
      solution.dual_y.size() != static_cast<Eigen::Index>(problem.constraints.size()))
    return rep;
  rep.has_dual = true;
  // R = sum_i y_i A_i - C - Z, accumulated in long double.
  using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  std::vector<MatL> R(problem.blocks.size());
  std::vector<VecL> r(problem.blocks.size());
  long double csq = 0;
  for (std::size_t k = 0; k < problem.blocks.size(); ++k) {
    const auto& blk = problem.blocks[k];
    if (blk.kind == BlockKind::psd) {
      R[k] = -solution.dual_slack[k].matrix.cast<long double>();
    } else {
      r[k] = -solution.dual_slack[k].values.cast<long double>();
    }
  }
  auto add = [&](const SparseEntry& e, long double coeff) {
    const long double v = coeff * e.value;
    if (problem.blocks[static_cast<std::size_t>(e.block)].kind == BlockKind::psd) {
      R[e.block](e.row, e.col) += v;
      if (e.row != e.col) R[e.block](e.col, e.row) += v;
    } else {
      r[e.block](e.row) += v;
    }
  };
  for (const auto& e : problem.objective) {
    add(e, -1.0L);
    csq += static_cast<long double>(e.value) * e.value * (e.row == e.col ? 1 : 2);
  }
  long double dobj = 0;
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const long double yi = solution.dual_y(static_cast<Eigen::Index>(i));
    dobj += yi * problem.constraints[i].rhs;
    if (yi == 0) continue;
    for (const auto& e : problem.constraints[i].entries) add(e, yi);
  }
  long double rsq = 0, xz = 0;
  int dims = 0;
  for (std::size_t k = 0; k < problem.blocks.size(); ++k) {
    dims += problem.blocks[k].dim;
    if (problem.blocks[k].kind == BlockKind::psd) {
      rsq += R[k].squaredNorm();
      xz += (solution.primal[k].matrix.cast<long double>().cwiseProduct(solution.dual_slack[k].matrix.cast<long double>()))
                .sum();
    } else {
      rsq += r[k].squaredNorm();
      xz += solution.primal[k].values.cast<long double>().dot(solution.dual_slack[k].values.cast<long double>());
    }
  }
  rep.dual_relative = static_cast<double>(std::sqrt(rsq) / (1 + std::sqrt(csq)));
  rep.dual_objective = static_cast<double>(dobj);
  rep.complementarity = static_cast<double>(xz / std::max(1, dims));
  rep.dual_cone_min = cone_min(problem, solution.dual_slack);
  return rep;
}

}  // namespace exactsub
