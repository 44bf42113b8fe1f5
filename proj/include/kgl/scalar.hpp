#pragma once

#include <complex>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace kgl {

/// Documented tolerance for the float fallback.
inline constexpr double kFloatTolerance = 1e-12;

/// Largest cyclotomic order kept exact; beyond it arithmetic falls back to floats.
inline constexpr int kMaxCyclotomicOrder = 2048;

std::string rational_to_string(const mpq_class& q);
mpq_class parse_rational(const std::string& text);
mpq_class rational_from_json(const nlohmann::json& j);

/// Complex scalar. Exact values live in a cyclotomic field Q(zeta_n) (so Gaussian
/// rationals and roots of unity at rational turns are exact); anything else is a
/// complex<double> approximation.
class Scalar {
 public:
  Scalar();
  Scalar(long value);  // NOLINT(google-explicit-constructor)

  static Scalar rational(const mpq_class& q);
  static Scalar gaussian(const mpq_class& re, const mpq_class& im);
  /// exp(2 pi i t) for rational t.
  static Scalar turn(const mpq_class& t);
  static Scalar approx(std::complex<double> z);

  bool exact() const { return exact_; }
  bool is_zero() const;
  std::complex<double> to_complex() const;
  double abs() const { return std::abs(to_complex()); }

  /// If the value is a Gaussian rational, writes it and returns true.
  bool as_gaussian(mpq_class& re, mpq_class& im) const;

  Scalar conj() const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }

  /// Exact comparison for exact pairs; tolerance comparison otherwise.
  bool equals(const Scalar& o, double tol = kFloatTolerance) const;

  nlohmann::json to_json() const;
  static Scalar from_json(const nlohmann::json& j);
  std::string to_string() const;

 private:
  bool exact_ = true;
  int order_ = 1;                  // n for Q(zeta_n)
  std::vector<mpq_class> coeff_;   // power basis coordinates, length phi(n)
  std::complex<double> approx_{0.0, 0.0};

  void lift_to(int order);
  void to_approx();
  void trim();
};

}  // namespace kgl
