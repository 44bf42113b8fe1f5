#pragma once
// Independent reference computations used only by the tests.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "kgl/graph.hpp"
#include "kgl/snf.hpp"

namespace oracle {

using Mat = std::vector<std::vector<std::int64_t>>;

inline Mat mat_mul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
  Mat c(n, std::vector<std::int64_t>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
  return c;
}

inline Mat mat_identity(std::size_t n) {
  Mat c(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) c[i][i] = 1;
  return c;
}

/// |v Lambda^n w| from products of the coordinate matrices.
inline Mat path_counts(const kgl::KGraph& g, const kgl::Degree& n) {
  Mat out = mat_identity(static_cast<std::size_t>(g.num_vertices()));
  for (int i = 0; i < g.rank(); ++i)
    for (std::int64_t r = 0; r < n[i]; ++r) out = mat_mul(out, g.adjacency()[i]);
  return out;
}

/// Fraction-free determinant, written independently of the library's version.
inline mpz_class det(std::vector<std::vector<mpz_class>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  mpz_class sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

inline void combinations(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Invariant factors from gcds of minors: d_1 ... d_i = gcd of i x i minors.
inline std::vector<mpz_class> invariant_factors(const kgl::BigMatrix& m) {
  const std::size_t r = m.size(), c = r ? m[0].size() : 0;
  std::vector<mpz_class> out;
  mpz_class prev = 1;
  for (std::size_t i = 1; i <= std::min(r, c); ++i) {
    std::vector<std::vector<std::size_t>> rs, cs;
    combinations(r, i, rs);
    combinations(c, i, cs);
    mpz_class g = 0;
    for (const auto& ri : rs) {
      for (const auto& ci : cs) {
        std::vector<std::vector<mpz_class>> sub(i, std::vector<mpz_class>(i));
        for (std::size_t a = 0; a < i; ++a)
          for (std::size_t b = 0; b < i; ++b) sub[a][b] = m[ri[a]][ci[b]];
        mpz_class d = det(sub);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
        if (g == 1) break;
      }
      if (g == 1) break;
    }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  while (out.size() < std::min(r, c)) out.push_back(0);
  return out;
}

inline kgl::BigMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int lo = -9, int hi = 9) {
  std::uniform_int_distribution<int> d(lo, hi);
  kgl::BigMatrix m(r, std::vector<mpz_class>(c));
  for (auto& row : m)
    for (auto& x : row) x = d(rng);
  return m;
}

/// MCE by exhaustion over all paths of the join degree.
inline std::vector<kgl::Path> mce_brute(const kgl::KGraph& g, const kgl::Path& a, const kgl::Path& b) {
  std::vector<kgl::Path> out;
  for (const kgl::Path& p : g.paths(kgl::join(a.degree, b.degree)))
    if (g.is_prefix(a, p) && g.is_prefix(b, p)) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
