#include "exactsub/facets.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "double_description.hpp"
#include "exactsub/stable_sets.hpp"

namespace exactsub {

double LinearInequality::lhs(const Eigen::MatrixXd& X) const {
  double s = 0.0;
  for (const Term& t : terms) s += static_cast<double>(t.coeff) * X(t.row, t.col);
  return s;
}

Eigen::MatrixXd LinearInequality::coefficient_matrix(int k) const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
  for (const Term& t : terms) {
    if (t.row == t.col) {
      A(t.row, t.col) += static_cast<double>(t.coeff);
    } else {
      A(t.row, t.col) += 0.5 * static_cast<double>(t.coeff);
      A(t.col, t.row) += 0.5 * static_cast<double>(t.coeff);
    }
  }
  return A;
}

void LinearInequality::canonicalize() {
  for (Term& t : terms)
    if (t.row > t.col) std::swap(t.row, t.col);
  std::sort(terms.begin(), terms.end());
  std::vector<Term> merged;
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff == 0; });
  std::int64_t g = rhs < 0 ? -rhs : rhs;
  for (const Term& t : merged) g = std::gcd(g, t.coeff < 0 ? -t.coeff : t.coeff);
  if (g > 1) {
    for (Term& t : merged) t.coeff /= g;
    rhs /= g;
  }
  terms = std::move(merged);
}

LinearInequality LinearInequality::relabeled(std::span<const int> map) const {
  LinearInequality out;
  out.rhs = rhs;
  for (const Term& t : terms) {
    int r = map[t.row], c = map[t.col];
    if (r > c) std::swap(r, c);
    out.terms.push_back({r, c, t.coeff});
  }
  std::sort(out.terms.begin(), out.terms.end());
  return out;
}

int triangle_index(int row, int col, int k) {
  // Entries before row `row`: k + (k-1) + ... + (k-row+1).
  return row * k - row * (row - 1) / 2 + (col - row);
}

namespace {

// Homogenized vertex (1, upper triangle of s s^T) for every s in {0,1}^k.
std::vector<detail::IntVector> homogenized_vertices(int k) {
  const int d = k * (k + 1) / 2;
  std::vector<detail::IntVector> rows;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    detail::IntVector w(static_cast<std::size_t>(d + 1), 0);
    w[0] = 1;
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j)
        if (((mask >> i) & 1u) && ((mask >> j) & 1u)) w[1 + triangle_index(i, j, k)] = 1;
    rows.push_back(std::move(w));
  }
  return rows;
}

void sort_system(FacetSystem& sys) {
  for (auto& ineq : sys.inequalities) ineq.canonicalize();
  std::sort(sys.inequalities.begin(), sys.inequalities.end());
}

}  // namespace

FacetSystem facets_stab2_empty(int k, bool allow_long_running) {
  if (k < 2 || k > 6) throw std::invalid_argument("facet enumeration supports 2 <= k <= 6");
  if (k == 6 && !allow_long_running)
    throw ResourceLimitError("k = 6 facet enumeration takes hours; pass the long-running flag");
  const auto rows = homogenized_vertices(k);
  const auto rays = detail::cone_extreme_rays(rows);

  FacetSystem sys;
  sys.order = k;
  sys.source = FacetSource::enumerated;
  for (const auto& ray : rays) {
    // ray = (a0, a): a0 + <a, x> >= 0, i.e. <-a, x> <= a0.
    LinearInequality ineq;
    if (!ray[0].fits_slong_p()) throw std::overflow_error("facet right-hand side overflow");
    ineq.rhs = ray[0].get_si();
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        const mpz_class& a = ray[static_cast<std::size_t>(1 + triangle_index(i, j, k))];
        if (a == 0) continue;
        if (!a.fits_slong_p()) throw std::overflow_error("facet coefficient overflow");
        ineq.terms.push_back({i, j, -a.get_si()});
      }
    sys.inequalities.push_back(std::move(ineq));
  }
  sort_system(sys);
  return sys;
}

const FacetSystem& cached_facets_stab2_empty(int k) {
  if (k < 2 || k > 5) throw std::invalid_argument("cached facet systems exist for 2 <= k <= 5");
  static std::array<std::once_flag, 6> once;
  static std::array<FacetSystem, 6> cache;
  std::call_once(once[static_cast<std::size_t>(k)],
                 [k] { cache[static_cast<std::size_t>(k)] = facets_stab2_empty(k); });
  return cache[static_cast<std::size_t>(k)];
}

std::vector<LinearInequality> esc2_inequalities(int i, int j) {
  if (i == j) throw std::invalid_argument("esc2_inequalities needs distinct indices");
  if (i > j) std::swap(i, j);
  return {
      {{{i, j, -1}}, 0},                      // 0 <= X_ij
      {{{i, i, -1}, {i, j, 1}}, 0},           // X_ij <= X_ii
      {{{i, j, 1}, {j, j, -1}}, 0},           // X_ij <= X_jj
      {{{i, i, 1}, {i, j, -1}, {j, j, 1}}, 1} // X_ii + X_jj <= 1 + X_ij
  };
}

std::vector<LinearInequality> esc3_inequalities(int i, int j, int l) {
  if (i == j || i == l || j == l) throw std::invalid_argument("esc3_inequalities needs distinct indices");
  std::array<int, 3> v{i, j, l};
  std::sort(v.begin(), v.end());
  const auto [a, b, c] = v;
  std::vector<LinearInequality> out;
  for (auto [p, q] : {std::pair{a, b}, std::pair{a, c}, std::pair{b, c}}) {
    auto pair = esc2_inequalities(p, q);
    out.insert(out.end(), pair.begin(), pair.end());
  }
  // X_ab + X_ac <= X_aa + X_bc and its two rotations.
  out.push_back({{{a, a, -1}, {a, b, 1}, {a, c, 1}, {b, c, -1}}, 0});
  out.push_back({{{a, b, 1}, {a, c, -1}, {b, b, -1}, {b, c, 1}}, 0});
  out.push_back({{{a, b, -1}, {a, c, 1}, {b, c, 1}, {c, c, -1}}, 0});
  out.push_back({{{a, a, 1}, {a, b, -1}, {a, c, -1}, {b, b, 1}, {b, c, -1}, {c, c, 1}}, 1});
  for (auto& ineq : out) ineq.canonicalize();
  return out;
}

FacetSystem handcoded_facets(int k) {
  FacetSystem sys;
  sys.order = k;
  sys.source = FacetSource::handcoded;
  if (k == 2) {
    sys.inequalities = esc2_inequalities(0, 1);
  } else if (k == 3) {
    sys.inequalities = esc3_inequalities(0, 1, 2);
  } else {
    throw std::invalid_argument("hand-coded facet systems exist for k = 2, 3");
  }
  sort_system(sys);
  return sys;
}

int tight_vertex_rank(const LinearInequality& ineq, int k) {
  std::vector<detail::IntVector> tight;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::int64_t lhs = 0;
    for (const Term& t : ineq.terms)
      if (((mask >> t.row) & 1u) && ((mask >> t.col) & 1u)) lhs += t.coeff;
    if (lhs != ineq.rhs) continue;
    detail::IntVector w(static_cast<std::size_t>(k * (k + 1) / 2 + 1), 0);
    w[0] = 1;
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j)
        if (((mask >> i) & 1u) && ((mask >> j) & 1u)) w[1 + triangle_index(i, j, k)] = 1;
    tight.push_back(std::move(w));
  }
  // Linear rank of the homogenized points = number of affinely independent points.
  return detail::rational_rank(tight);
}

void write_ieq(std::ostream& out, const FacetSystem& system) {
  const int k = system.order;
  const int d = k * (k + 1) / 2;
  out << "DIM = " << d << "\n\n";
  out << "COMMENT\n";
  out << "STAB2 of the edgeless graph on " << k << " vertices; x"
      << "(index) enumerates X(i,j), i <= j, row by row\n\n";
  out << "INEQUALITIES_SECTION\n";
  std::size_t idx = 0;
  for (const auto& ineq : system.inequalities) {
    ++idx;
    out << "(" << (idx < 10 ? "  " : idx < 100 ? " " : "") << idx << ") ";
    bool first = true;
    for (const Term& t : ineq.terms) {
      const int x = triangle_index(t.row, t.col, k) + 1;
      const std::int64_t c = t.coeff;
      if (c < 0) {
        out << '-';
      } else if (!first) {
        out << '+';
      }
      const std::int64_t mag = c < 0 ? -c : c;
      if (mag != 1) out << mag;
      out << 'x' << x;
      first = false;
    }
    if (first) out << '0';
    out << " <= " << ineq.rhs << '\n';
  }
  out << "\nEND\n";
}

}  // namespace exactsub
