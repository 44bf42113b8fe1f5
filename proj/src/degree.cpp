#include "kgl/degree.hpp"

#include <algorithm>
#include <sstream>

#include "kgl/error.hpp"

namespace kgl {

Degree zero_degree(int k) { return Degree(static_cast<std::size_t>(k), 0); }

Degree ones(int k, std::int64_t scale) { return Degree(static_cast<std::size_t>(k), scale); }

Degree unit_degree(int k, int color) {
  Degree d = zero_degree(k);
  d.at(static_cast<std::size_t>(color)) = 1;
  return d;
}

Degree operator+(const Degree& a, const Degree& b) {
  Degree r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Degree operator-(const Degree& a, const Degree& b) {
  Degree r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Degree join(const Degree& a, const Degree& b) {
  Degree r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

Degree meet(const Degree& a, const Degree& b) {
  Degree r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::min(a[i], b[i]);
  return r;
}

bool leq(const Degree& a, const Degree& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

bool is_zero(const Degree& a) {
  return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
}

bool is_nonnegative(const Degree& a) {
  return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x >= 0; });
}

Degree positive_part(const Degree& a) {
  Degree r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max<std::int64_t>(a[i], 0);
  return r;
}

Degree negative_part(const Degree& a) {
  Degree r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max<std::int64_t>(-a[i], 0);
  return r;
}

std::int64_t total(const Degree& a) {
  std::int64_t t = 0;
  for (auto x : a) t += x;
  return t;
}

std::vector<Degree> degrees_below(const Degree& bound) {
  std::vector<Degree> out;
  if (!is_nonnegative(bound)) return out;
  Degree cur = zero_degree(static_cast<int>(bound.size()));
  while (true) {
    out.push_back(cur);
    std::size_t i = bound.size();
    while (i > 0) {
      --i;
      if (cur[i] < bound[i]) {
        ++cur[i];
        for (std::size_t j = i + 1; j < bound.size(); ++j) cur[j] = 0;
        break;
      }
      if (i == 0) return out;
    }
    if (bound.empty()) return out;
  }
}

std::string to_string(const Degree& a) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
  os << ')';
  return os.str();
}

Degree parse_degree(const std::string& text) {
  Degree d;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) return;
    try {
      d.push_back(std::stoll(cur));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "bad degree component '" + cur + "'");
    }
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '(' || ch == ')')
      flush();
    else
      cur.push_back(ch);
  }
  flush();
  if (d.empty()) throw Error(ErrorKind::ParseError, "empty degree '" + text + "'");
  return d;
}

}  // namespace kgl
