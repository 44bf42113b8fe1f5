#include "kgl/scalar.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include "kgl/error.hpp"

namespace kgl {

namespace {

using IntPoly = std::vector<mpz_class>;  // coefficient i multiplies x^i

IntPoly poly_divide_exact(IntPoly num, const IntPoly& den) {
  // den is monic; the division is exact.
  const long nd = static_cast<long>(den.size()) - 1;
  const long nn = static_cast<long>(num.size()) - 1;
  if (nn < nd) return IntPoly{0};
  IntPoly q(static_cast<std::size_t>(nn - nd + 1), 0);
  for (long i = nn; i >= nd; --i) {
    mpz_class lead = num[i];
    if (lead == 0) continue;
    q[i - nd] = lead;
    for (long j = 0; j <= nd; ++j) num[i - nd + j] -= lead * den[j];
  }
  return q;
}

const IntPoly& cyclotomic(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<IntPoly>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, computed without recursion on the lock.
  std::vector<int> divisors;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) divisors.push_back(d);
  for (int d : divisors) {
    if (cache.count(d)) continue;
    IntPoly num(static_cast<std::size_t>(d) + 1, 0);
    num[0] = -1;
    num[d] = 1;
    for (int e = 1; e < d; ++e)
      if (d % e == 0) num = poly_divide_exact(num, *cache.at(e));
    num.resize(static_cast<std::size_t>(d) + 1);
    while (num.size() > 1 && num.back() == 0) num.pop_back();
    cache.emplace(d, std::make_unique<IntPoly>(num));
  }
  return *cache.at(n);
}

int phi_degree(int n) { return static_cast<int>(cyclotomic(n).size()) - 1; }

// Reduce a rational polynomial modulo the monic integer polynomial Phi_n.
std::vector<mpq_class> reduce(std::vector<mpq_class> p, int n) {
  const IntPoly& phi = cyclotomic(n);
  const std::size_t deg = phi.size() - 1;
  for (std::size_t i = p.size(); i-- > deg;) {
    if (p[i] == 0) continue;
    mpq_class lead = p[i];
    std::size_t shift = i - deg;
    for (std::size_t j = 0; j <= deg; ++j) p[shift + j] -= lead * phi[j];
  }
  p.resize(deg, 0);
  return p;
}

}  // namespace

std::string rational_to_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class parse_rational(const std::string& text) {
  mpq_class q;
  std::string t = text;
  if (t.empty() || q.set_str(t, 10) != 0 || q.get_den() == 0)
    throw Error(ErrorKind::ParseError, "bad rational '" + text + "'");
  q.canonicalize();
  return q;
}

mpq_class rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return mpq_class(mpz_class(std::to_string(j.get<long long>())));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error(ErrorKind::ParseError, "rational must be an integer or a \"p/q\" string", {{"value", j}});
}

Scalar::Scalar() : coeff_{mpq_class(0)} {}
Scalar::Scalar(long value) : coeff_{mpq_class(value)} {}

Scalar Scalar::rational(const mpq_class& q) {
  Scalar s;
  s.coeff_[0] = q;
  return s;
}

Scalar Scalar::gaussian(const mpq_class& re, const mpq_class& im) {
  if (im == 0) return rational(re);
  Scalar s;
  s.order_ = 4;
  s.coeff_ = {re, im};
  return s;
}

Scalar Scalar::turn(const mpq_class& t) {
  mpq_class r = t - mpq_class(mpz_class(mpz_class(t.get_num() / t.get_den())));
  if (r < 0) r += 1;
  r.canonicalize();
  mpz_class den = r.get_den();
  if (den > kMaxCyclotomicOrder) {
    double a = 2.0 * std::numbers::pi * r.get_d();
    return approx({std::cos(a), std::sin(a)});
  }
  int n = static_cast<int>(den.get_si());
  int j = static_cast<int>(mpz_class(r.get_num()).get_si());
  std::vector<mpq_class> p(static_cast<std::size_t>(j) + 1, 0);
  p[j] = 1;
  Scalar s;
  s.order_ = n;
  s.coeff_ = reduce(std::move(p), n);
  return s;
}

Scalar Scalar::approx(std::complex<double> z) {
  Scalar s;
  s.exact_ = false;
  s.coeff_.clear();
  s.approx_ = z;
  return s;
}

bool Scalar::is_zero() const {
  if (!exact_) return std::abs(approx_) <= kFloatTolerance;
  for (const auto& c : coeff_)
    if (c != 0) return false;
  return true;
}

std::complex<double> Scalar::to_complex() const {
  if (!exact_) return approx_;
  std::complex<double> z{0.0, 0.0};
  for (std::size_t j = 0; j < coeff_.size(); ++j) {
    if (coeff_[j] == 0) continue;
    double a = 2.0 * std::numbers::pi * static_cast<double>(j) / order_;
    z += coeff_[j].get_d() * std::complex<double>(std::cos(a), std::sin(a));
  }
  return z;
}

bool Scalar::as_gaussian(mpq_class& re, mpq_class& im) const {
  if (!exact_) return false;
  if (order_ % 4 != 0) {
    for (std::size_t j = 1; j < coeff_.size(); ++j)
      if (coeff_[j] != 0) return false;
    re = coeff_[0];
    im = 0;
    return true;
  }
  Scalar i_lift = gaussian(0, 1);
  i_lift.lift_to(order_);
  std::size_t pivot = 0;
  for (std::size_t j = 1; j < i_lift.coeff_.size(); ++j)
    if (i_lift.coeff_[j] != 0) {
      pivot = j;
      break;
    }
  im = coeff_[pivot] / i_lift.coeff_[pivot];
  re = coeff_[0] - im * i_lift.coeff_[0];
  Scalar check = gaussian(re, im);
  check.lift_to(order_);
  return check.coeff_ == coeff_;
}

void Scalar::lift_to(int order) {
  if (order == order_) return;
  const int step = order / order_;
  std::vector<mpq_class> p(static_cast<std::size_t>(step) * coeff_.size() + 1, 0);
  for (std::size_t j = 0; j < coeff_.size(); ++j) p[j * static_cast<std::size_t>(step)] = coeff_[j];
  coeff_ = reduce(std::move(p), order);
  order_ = order;
}

void Scalar::to_approx() {
  if (!exact_) return;
  approx_ = to_complex();
  exact_ = false;
  coeff_.clear();
}

Scalar Scalar::conj() const {
  if (!exact_) return approx(std::conj(approx_));
  // conj(zeta^j) = zeta^{n-j}
  std::vector<mpq_class> p(static_cast<std::size_t>(order_) + 1, 0);
  p[0] = coeff_[0];
  for (std::size_t j = 1; j < coeff_.size(); ++j) p[static_cast<std::size_t>(order_) - j] += coeff_[j];
  Scalar s;
  s.order_ = order_;
  s.coeff_ = reduce(std::move(p), order_);
  return s;
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  if (!exact_) {
    s.approx_ = -approx_;
    return s;
  }
  for (auto& c : s.coeff_) c = -c;
  return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (!exact_ || !o.exact_) {
    std::complex<double> z = to_complex() + o.to_complex();
    *this = approx(z);
    return *this;
  }
  int l = std::lcm(order_, o.order_);
  if (l > kMaxCyclotomicOrder) {
    *this = approx(to_complex() + o.to_complex());
    return *this;
  }
  Scalar b = o;
  lift_to(l);
  b.lift_to(l);
  for (std::size_t j = 0; j < coeff_.size(); ++j) coeff_[j] += b.coeff_[j];
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (!exact_ || !o.exact_) {
    *this = approx(to_complex() * o.to_complex());
    return *this;
  }
  int l = std::lcm(order_, o.order_);
  if (l > kMaxCyclotomicOrder) {
    *this = approx(to_complex() * o.to_complex());
    return *this;
  }
  Scalar b = o;
  lift_to(l);
  b.lift_to(l);
  std::vector<mpq_class> p(coeff_.size() + b.coeff_.size(), 0);
  for (std::size_t i = 0; i < coeff_.size(); ++i) {
    if (coeff_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeff_.size(); ++j)
      if (b.coeff_[j] != 0) p[i + j] += coeff_[i] * b.coeff_[j];
  }
  coeff_ = reduce(std::move(p), l);
  return *this;
}

bool Scalar::equals(const Scalar& o, double tol) const {
  if (exact_ && o.exact_) return (*this - o).is_zero();
  std::complex<double> a = to_complex(), b = o.to_complex();
  return std::abs(a - b) <= tol * (1.0 + std::abs(a) + std::abs(b));
}

nlohmann::json Scalar::to_json() const {
  nlohmann::json j;
  mpq_class re, im;
  if (as_gaussian(re, im)) {
    j["re"] = rational_to_string(re);
    j["im"] = rational_to_string(im);
    return j;
  }
  std::complex<double> z = to_complex();
  j["re"] = z.real();
  j["im"] = z.imag();
  if (exact_) {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& q : coeff_) c.push_back(rational_to_string(q));
    j["cyclotomic"] = {{"order", order_}, {"coefficients", c}};
  }
  return j;
}

Scalar Scalar::from_json(const nlohmann::json& j) {
  if (j.contains("cyclotomic")) {
    const auto& c = j["cyclotomic"];
    Scalar s;
    s.order_ = c.at("order").get<int>();
    s.coeff_.clear();
    for (const auto& q : c.at("coefficients")) s.coeff_.push_back(rational_from_json(q));
    if (static_cast<int>(s.coeff_.size()) != phi_degree(s.order_))
      throw Error(ErrorKind::ParseError, "cyclotomic coefficient vector has the wrong length");
    return s;
  }
  auto part = [&](const char* key) -> nlohmann::json { return j.contains(key) ? j[key] : nlohmann::json("0"); };
  nlohmann::json re = part("re"), im = part("im");
  if (re.is_number_float() || im.is_number_float())
    return approx({re.get<double>(), im.get<double>()});
  return gaussian(rational_from_json(re), rational_from_json(im));
}

std::string Scalar::to_string() const {
  mpq_class re, im;
  if (as_gaussian(re, im)) {
    if (im == 0) return rational_to_string(re);
    return rational_to_string(re) + (im < 0 ? "" : "+") + rational_to_string(im) + "i";
  }
  std::complex<double> z = to_complex();
  return std::to_string(z.real()) + (z.imag() < 0 ? "" : "+") + std::to_string(z.imag()) + "i";
}

}  // namespace kgl
