#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kgl {

/// Element of N^k (or Z^k for grading data), stored componentwise.
using Degree = std::vector<std::int64_t>;

Degree zero_degree(int k);
Degree ones(int k, std::int64_t scale = 1);
Degree unit_degree(int k, int color);

Degree operator+(const Degree& a, const Degree& b);
Degree operator-(const Degree& a, const Degree& b);

Degree join(const Degree& a, const Degree& b);
Degree meet(const Degree& a, const Degree& b);
bool leq(const Degree& a, const Degree& b);
bool is_zero(const Degree& a);
bool is_nonnegative(const Degree& a);
Degree positive_part(const Degree& a);
Degree negative_part(const Degree& a);
std::int64_t total(const Degree& a);

/// All degrees n with 0 <= n <= bound, in lexicographic order.
std::vector<Degree> degrees_below(const Degree& bound);

std::string to_string(const Degree& a);
Degree parse_degree(const std::string& text);

}  // namespace kgl
