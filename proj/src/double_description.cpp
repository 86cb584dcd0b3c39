#include "double_description.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>

namespace exactsub::detail {

namespace {

using RationalMatrix = std::vector<std::vector<mpq_class>>;

void make_primitive(IntVector& v) {
  mpz_class g = 0;
  for (const auto& x : v) g = gcd(g, x);
  if (g > 1)
    for (auto& x : v) x /= g;
}

mpz_class dot(const IntVector& a, const IntVector& b) {
  mpz_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Indices of a maximal linearly independent subset of rows, greedy in order.
std::vector<std::size_t> independent_rows(const std::vector<IntVector>& rows) {
  std::vector<std::size_t> picked;
  RationalMatrix basis;  // echelon rows with their pivot columns
  std::vector<std::size_t> pivots;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<mpq_class> v(rows[r].begin(), rows[r].end());
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (v[pivots[b]] == 0) continue;
      const mpq_class f = v[pivots[b]] / basis[b][pivots[b]];
      for (std::size_t c = 0; c < v.size(); ++c) v[c] -= f * basis[b][c];
    }
    std::size_t pivot = v.size();
    for (std::size_t c = 0; c < v.size(); ++c)
      if (v[c] != 0) {
        pivot = c;
        break;
      }
    if (pivot == v.size()) continue;
    basis.push_back(std::move(v));
    pivots.push_back(pivot);
    picked.push_back(r);
  }
  return picked;
}

struct Ray {
  IntVector coords;
  std::uint64_t zeros;  // rows (by original index) where the ray is tight
};

}  // namespace

int rational_rank(const std::vector<IntVector>& rows) {
  return static_cast<int>(independent_rows(rows).size());
}

std::vector<IntVector> cone_extreme_rays(const std::vector<IntVector>& rows) {
  if (rows.empty()) return {};
  if (rows.size() > 64) throw std::invalid_argument("double description limited to 64 rows");
  const std::size_t dim = rows.front().size();
  const auto basis = independent_rows(rows);
  if (basis.size() != dim) throw std::invalid_argument("rows do not span the space; cone not pointed");

  // Initial simplicial cone: rays are the columns of the inverse basis matrix.
  RationalMatrix aug(dim, std::vector<mpq_class>(2 * dim));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t c = 0; c < dim; ++c) aug[i][c] = rows[basis[i]][c];
    aug[i][dim + i] = 1;
  }
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t piv = col;
    while (aug[piv][col] == 0) ++piv;
    std::swap(aug[piv], aug[col]);
    const mpq_class p = aug[col][col];
    for (auto& x : aug[col]) x /= p;
    for (std::size_t r = 0; r < dim; ++r) {
      if (r == col || aug[r][col] == 0) continue;
      const mpq_class f = aug[r][col];
      for (std::size_t c = 0; c < 2 * dim; ++c) aug[r][c] -= f * aug[col][c];
    }
  }
  std::uint64_t processed = 0;
  for (std::size_t b : basis) processed |= std::uint64_t{1} << b;

  std::vector<Ray> rays;
  for (std::size_t j = 0; j < dim; ++j) {
    mpz_class denom_lcm = 1;
    for (std::size_t i = 0; i < dim; ++i) denom_lcm = lcm(denom_lcm, aug[i][dim + j].get_den());
    Ray ray;
    ray.coords.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const mpq_class scaled = aug[i][dim + j] * denom_lcm;
      ray.coords[i] = scaled.get_num();
    }
    make_primitive(ray.coords);
    ray.zeros = processed & ~(std::uint64_t{1} << basis[j]);
    rays.push_back(std::move(ray));
  }

  for (std::size_t r = 0; r < rows.size(); ++r) {
    if ((processed >> r) & 1u) continue;
    const std::uint64_t bit = std::uint64_t{1} << r;
    std::vector<mpz_class> value(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      value[i] = dot(rows[r], rays[i].coords);
      const int s = sgn(value[i]);
      if (s > 0) pos.push_back(i);
      if (s < 0) neg.push_back(i);
      if (s >= 0) {
        next.push_back(rays[i]);
        if (s == 0) next.back().zeros |= bit;
      }
    }
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        const std::uint64_t common = rays[p].zeros & rays[q].zeros;
        if (std::popcount(common) + 2 < static_cast<int>(dim)) continue;
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size() && adjacent; ++o) {
          if (o == p || o == q) continue;
          if ((common & ~rays[o].zeros) == 0) adjacent = false;
        }
        if (!adjacent) continue;
        Ray ray;
        ray.coords.resize(dim);
        const mpz_class wp = value[p];
        const mpz_class wq = -value[q];
        for (std::size_t c = 0; c < dim; ++c)
          ray.coords[c] = wp * rays[q].coords[c] + wq * rays[p].coords[c];
        make_primitive(ray.coords);
        ray.zeros = common | bit;
        next.push_back(std::move(ray));
      }
    }
    processed |= bit;
    rays = std::move(next);
  }

  std::vector<IntVector> out;
  out.reserve(rays.size());
  for (auto& ray : rays) out.push_back(std::move(ray.coords));
  return out;
}

}  // namespace exactsub::detail
