#include "kgl/snf.hpp"

#include <algorithm>
#include <utility>

namespace kgl {

BigMatrix identity_matrix(std::size_t n) {
  BigMatrix m = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

BigMatrix zero_matrix(std::size_t r, std::size_t c) {
  return BigMatrix(r, std::vector<mpz_class>(c, 0));
}

std::size_t rows(const BigMatrix& a) { return a.size(); }
std::size_t cols(const BigMatrix& a, std::size_t fallback) { return a.empty() ? fallback : a[0].size(); }

BigMatrix multiply(const BigMatrix& a, const BigMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  BigMatrix c = zero_matrix(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
    }
  return c;
}

BigMatrix transpose(const BigMatrix& a) {
  if (a.empty()) return {};
  BigMatrix t = zero_matrix(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

std::vector<mpz_class> apply(const BigMatrix& a, const std::vector<mpz_class>& x) {
  std::vector<mpz_class> y(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

mpz_class determinant(const BigMatrix& in) {
  const std::size_t n = in.size();
  if (n == 0) return 1;
  BigMatrix a = in;
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
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

nlohmann::json matrix_to_json(const BigMatrix& a) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& row : a) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& x : row) {
      if (x.fits_slong_p())
        r.push_back(x.get_si());
      else
        r.push_back(x.get_str());
    }
    j.push_back(r);
  }
  return j;
}

namespace {

struct Work {
  BigMatrix A, U, V, Ui, Vi;
  std::size_t m, n;

  // row_i += q * row_j  (left-multiply by E); inverse subtracts column i from column j in Ui.
  void row_add(std::size_t i, std::size_t j, const mpz_class& q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < n; ++c) A[i][c] += q * A[j][c];
    for (std::size_t c = 0; c < m; ++c) U[i][c] += q * U[j][c];
    for (std::size_t r = 0; r < m; ++r) Ui[r][j] -= q * Ui[r][i];
  }
  void row_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(A[i], A[j]);
    std::swap(U[i], U[j]);
    for (std::size_t r = 0; r < m; ++r) std::swap(Ui[r][i], Ui[r][j]);
  }
  void row_negate(std::size_t i) {
    for (auto& x : A[i]) x = -x;
    for (auto& x : U[i]) x = -x;
    for (std::size_t r = 0; r < m; ++r) Ui[r][i] = -Ui[r][i];
  }
  // col_i += q * col_j  (right-multiply by E); inverse subtracts row i from row j in Vi.
  void col_add(std::size_t i, std::size_t j, const mpz_class& q) {
    if (q == 0) return;
    for (std::size_t r = 0; r < m; ++r) A[r][i] += q * A[r][j];
    for (std::size_t r = 0; r < n; ++r) V[r][i] += q * V[r][j];
    for (std::size_t c = 0; c < n; ++c) Vi[j][c] -= q * Vi[i][c];
  }
  void col_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < m; ++r) std::swap(A[r][i], A[r][j]);
    for (std::size_t r = 0; r < n; ++r) std::swap(V[r][i], V[r][j]);
    std::swap(Vi[i], Vi[j]);
  }
};

}  // namespace

SmithForm smith_normal_form(const BigMatrix& M) {
  Work w;
  w.A = M;
  w.m = M.size();
  w.n = M.empty() ? 0 : M[0].size();
  w.U = identity_matrix(w.m);
  w.Ui = identity_matrix(w.m);
  w.V = identity_matrix(w.n);
  w.Vi = identity_matrix(w.n);
  const std::size_t m = w.m, n = w.n;
  auto& A = w.A;

  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    while (true) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (A[i][j] != 0 && (pi == m || abs(A[i][j]) < abs(A[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi == m) goto done;
      w.row_swap(t, pi);
      w.col_swap(t, pj);

      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (A[i][t] == 0) continue;
        mpz_class q = A[i][t] / A[t][t];
        w.row_add(i, t, -q);
        if (A[i][t] != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (A[t][j] == 0) continue;
        mpz_class q = A[t][j] / A[t][t];
        w.col_add(j, t, -q);
        if (A[t][j] != 0) dirty = true;
      }
      if (dirty) continue;

      // Divisibility: fold any offending row into the pivot row and retry.
      bool divisible = true;
      for (std::size_t i = t + 1; i < m && divisible; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (A[i][j] % A[t][t] != 0) {
            w.row_add(t, i, 1);
            divisible = false;
            break;
          }
      if (!divisible) continue;
      if (A[t][t] < 0) w.row_negate(t);
      break;
    }
  }
done:
  SmithForm out;
  out.rank = t;
  out.diagonal.assign(std::min(m, n), 0);
  for (std::size_t i = 0; i < std::min(m, n); ++i) out.diagonal[i] = A[i][i];
  out.D = std::move(w.A);
  out.U = std::move(w.U);
  out.V = std::move(w.V);
  out.U_inv = std::move(w.Ui);
  out.V_inv = std::move(w.Vi);
  return out;
}

}  // namespace kgl
