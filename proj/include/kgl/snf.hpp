#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace kgl {

using BigMatrix = std::vector<std::vector<mpz_class>>;

BigMatrix identity_matrix(std::size_t n);
BigMatrix zero_matrix(std::size_t rows, std::size_t cols);
BigMatrix multiply(const BigMatrix& a, const BigMatrix& b);
BigMatrix transpose(const BigMatrix& a);
std::vector<mpz_class> apply(const BigMatrix& a, const std::vector<mpz_class>& x);
std::size_t rows(const BigMatrix& a);
std::size_t cols(const BigMatrix& a, std::size_t fallback = 0);
/// Fraction-free (Bareiss) determinant of a square matrix.
mpz_class determinant(const BigMatrix& a);
nlohmann::json matrix_to_json(const BigMatrix& a);

/// U * M * V = D with U, V unimodular and D diagonal with d_1 | d_2 | ... (zeros last).
struct SmithForm {
  BigMatrix D;
  BigMatrix U;
  BigMatrix V;
  BigMatrix U_inv;
  BigMatrix V_inv;
  std::vector<mpz_class> diagonal;  // min(rows, cols) entries, nonnegative
  std::size_t rank = 0;
};

SmithForm smith_normal_form(const BigMatrix& m);

}  // namespace kgl
