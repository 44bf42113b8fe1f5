#pragma once

#include <map>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "kgl/cocycle.hpp"
#include "kgl/graph.hpp"
#include "kgl/scalar.hpp"

namespace kgl {

/// Key (lambda, a, mu) of a spanning term s_lambda u_a s_mu^*.
struct TermKey {
  Path left;
  AbelianValue group;
  Path right;

  bool operator<(const TermKey& o) const {
    return std::tie(left, group, right) < std::tie(o.left, o.group, o.right);
  }
  bool operator==(const TermKey& o) const { return left == o.left && group == o.group && right == o.right; }
};

/// Finite sum of q * s_lambda u_a s_mu^*. Circle-valued twists are folded into q and
/// leave a trivial group part.
class AlgebraElement {
 public:
  using Terms = std::map<TermKey, Scalar>;

  explicit AlgebraElement(ValueGroup group = ValueGroup::trivial()) : group_(group) {}
  static AlgebraElement term(const Path& left, const AbelianValue& a, const Path& right, const Scalar& q = Scalar(1));
  static AlgebraElement vertex(const KGraph& g, int v, const ValueGroup& group);
  /// s_lambda
  static AlgebraElement s(const KGraph& g, const Path& lambda, const ValueGroup& group);
  /// s_lambda^*
  static AlgebraElement s_star(const KGraph& g, const Path& lambda, const ValueGroup& group);

  const ValueGroup& group() const { return group_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add(const TermKey& key, const Scalar& q);
  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  AlgebraElement scaled(const Scalar& q) const;

  /// Set of gradings d(lambda) - d(mu) present.
  std::vector<Degree> gradings() const;

  nlohmann::json to_json(const KGraph& g) const;
  static AlgebraElement from_json(const nlohmann::json& j, const KGraph& g, const ValueGroup& group);

 private:
  ValueGroup group_;
  Terms terms_;
};

/// The group part carried by algebra elements for a cocycle valued in `g`.
ValueGroup algebra_group(const ValueGroup& cocycle_group);

Degree grading(const TermKey& key);

AlgebraElement star_product(const KGraph& g, const AlgebraElement& x, const AlgebraElement& y, const Cocycle2& c);
/// Single-threaded reference for star_product.
AlgebraElement star_product_serial(const KGraph& g, const AlgebraElement& x, const AlgebraElement& y,
                                   const Cocycle2& c);
AlgebraElement involution(const AlgebraElement& x);
AlgebraElement expand_to_level(const KGraph& g, const AlgebraElement& x, const Cocycle2& c, const Degree& level);
bool equals(const KGraph& g, const AlgebraElement& x, const AlgebraElement& y, const Cocycle2& c);
AlgebraElement specialize(const AlgebraElement& x, const Character& chi);

/// Isomorphism induced by c - c2 = delta^1 b: s_lambda u_a s_mu^* -> s_lambda u_{a + b(lambda) - b(mu)} s_mu^*.
AlgebraElement cohomologous_map(const KGraph& g, const AlgebraElement& x, const OneCochain& b);

}  // namespace kgl
