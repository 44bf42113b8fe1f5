#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "kgl/graph.hpp"
#include "kgl/scalar.hpp"

namespace kgl {

enum class GroupKind { Trivial, FreeAbelian, Int, Rat, CircleTurns, CircleRadians };

struct ValueGroup {
  GroupKind kind = GroupKind::Trivial;
  int rank = 0;  // only for FreeAbelian

  static ValueGroup trivial() { return {GroupKind::Trivial, 0}; }
  static ValueGroup free_abelian(int m) { return {GroupKind::FreeAbelian, m}; }
  static ValueGroup integers() { return {GroupKind::Int, 0}; }
  static ValueGroup rationals() { return {GroupKind::Rat, 0}; }
  static ValueGroup circle_turns() { return {GroupKind::CircleTurns, 0}; }
  static ValueGroup circle_radians() { return {GroupKind::CircleRadians, 0}; }

  bool is_circle() const { return kind == GroupKind::CircleTurns || kind == GroupKind::CircleRadians; }
  bool operator==(const ValueGroup&) const = default;
  std::string name() const;
  nlohmann::json to_json() const;
  static ValueGroup from_json(const nlohmann::json& j);
};

/// Element of one of the supported abelian groups. Circle turns are kept reduced mod 1.
class AbelianValue {
 public:
  AbelianValue() = default;
  static AbelianValue zero(const ValueGroup& g);
  static AbelianValue free(const std::vector<mpz_class>& v);
  static AbelianValue generator(int rank, int index);
  static AbelianValue integer(const mpz_class& n);
  static AbelianValue rat(const mpq_class& q);
  static AbelianValue turns(const mpq_class& q);
  static AbelianValue radians(const mpq_class& r);

  const ValueGroup& group() const { return group_; }
  const std::vector<mpq_class>& entries() const { return v_; }
  bool is_zero() const;

  AbelianValue operator-() const;
  AbelianValue& operator+=(const AbelianValue& o);
  AbelianValue& operator-=(const AbelianValue& o);
  friend AbelianValue operator+(AbelianValue a, const AbelianValue& b) { return a += b; }
  friend AbelianValue operator-(AbelianValue a, const AbelianValue& b) { return a -= b; }
  AbelianValue times(const mpz_class& n) const;

  bool operator==(const AbelianValue& o) const;
  bool operator<(const AbelianValue& o) const;

  /// The unit complex number represented by a circle value.
  Scalar phase() const;

  nlohmann::json to_json() const;
  static AbelianValue from_json(const ValueGroup& g, const nlohmann::json& j);
  std::string to_string() const;

 private:
  ValueGroup group_;
  std::vector<mpq_class> v_;
  void normalize();
};

/// Character of a value group, landing in a circle group.
class Character {
 public:
  enum class Kind { TorusPoint, IntChar, RealChar, Evaluation };

  static Character torus(std::vector<mpq_class> turns);
  static Character integer(const mpq_class& z_turns);
  static Character real(const mpq_class& t);
  /// Identity on a circle group.
  static Character evaluation();

  Kind kind() const { return kind_; }
  bool accepts(const ValueGroup& g) const;
  ValueGroup target(const ValueGroup& source) const;
  AbelianValue apply(const AbelianValue& a) const;
  const std::vector<mpq_class>& turns() const { return turns_; }
  const mpq_class& parameter() const { return param_; }

  nlohmann::json to_json() const;
  static Character from_json(const nlohmann::json& j);

 private:
  Kind kind_ = Kind::Evaluation;
  std::vector<mpq_class> turns_;
  mpq_class param_;
};

/// A-valued function on paths, normalised to vanish on vertices.
class OneCochain {
 public:
  using Rule = std::function<AbelianValue(const KGraph&, const Path&)>;

  static OneCochain zero(const ValueGroup& g);
  static OneCochain table(const ValueGroup& g, std::map<Path, AbelianValue> values, Degree bound);
  /// b(lambda) = sum_i d(lambda)_i * per_color[i].
  static OneCochain degree_additive(const ValueGroup& g, std::vector<AbelianValue> per_color);
  /// b(lambda) = b0(s(lambda)) - b0(r(lambda)).
  static OneCochain vertex_coboundary(const ValueGroup& g, std::vector<AbelianValue> b0);
  static OneCochain rule(const ValueGroup& g, Rule r);

  const ValueGroup& group() const;
  AbelianValue operator()(const KGraph& g, const Path& p) const;
  OneCochain composed(const Character& chi) const;

  nlohmann::json to_json(const KGraph& g) const;
  static OneCochain from_json(const nlohmann::json& j, const KGraph& g);

  struct Node;

 private:
  std::shared_ptr<const Node> node_;
};

/// Categorical 2-cocycle (or candidate) with an exact representation.
class Cocycle2 {
 public:
  enum class Kind { DegreeBilinear, Coboundary, Table, Sum, Negated, Pullback, Composed };
  using PairTable = std::map<std::pair<Path, Path>, AbelianValue>;

  static Cocycle2 zero(const ValueGroup& g, int k);
  static Cocycle2 degree_bilinear(const ValueGroup& g, std::vector<std::vector<AbelianValue>> matrix);
  static Cocycle2 coboundary(OneCochain b);
  /// Finite table on composable pairs with d(a)+d(b) <= bound; missing entries are zero.
  static Cocycle2 table(const ValueGroup& g, PairTable entries, Degree bound);
  static Cocycle2 sum(std::vector<Cocycle2> terms);
  static Cocycle2 negated(Cocycle2 c);
  /// c o phi for a graph map given on vertices and edges.
  static Cocycle2 pullback(Cocycle2 base, KGraph base_graph, std::vector<int> vertex_map,
                           std::vector<int> edge_map);

  Kind kind() const;
  const ValueGroup& group() const;
  AbelianValue operator()(const KGraph& g, const Path& a, const Path& b) const;
  /// Degree bound for Table variants (empty when total).
  std::optional<Degree> bound() const;
  const std::vector<std::vector<AbelianValue>>& matrix() const;

  nlohmann::json to_json(const KGraph& g) const;
  static Cocycle2 from_json(const nlohmann::json& j, const KGraph& g);

  struct Node;

 private:
  std::shared_ptr<const Node> node_;
  friend Cocycle2 character_apply(const Cocycle2& c, const Character& chi);
};

Cocycle2 operator+(const Cocycle2& a, const Cocycle2& b);
Cocycle2 operator-(const Cocycle2& a, const Cocycle2& b);

/// The torus cocycle c(m,n) = sum_{j<i} m_i n_j (i,j) on a rank-k graph, valued in
/// the free abelian group on pairs j < i (ordered lexicographically by (i, j)).
Cocycle2 torus_cocycle(int k);
/// 0-based index of generator (i, j) in torus_cocycle(k); colors i, j are 1-based with j < i.
int torus_generator_index(int k, int i, int j);

struct VerifyResult {
  bool ok = true;
  std::string certificate;
  std::optional<std::array<Path, 3>> counterexample;
  std::optional<Path> normalization_failure;
  std::size_t triples_checked = 0;
};

AbelianValue eval_cocycle(const Cocycle2& c, const KGraph& g, const Path& a, const Path& b);
VerifyResult verify_cocycle(const Cocycle2& c, const KGraph& g, const Degree& bound,
                            bool allow_certificate = true);

OneCochain coboundary0(const ValueGroup& grp, std::vector<AbelianValue> b0);
Cocycle2 coboundary1(const OneCochain& b);

/// b0 with b0(s(e)) - b0(r(e)) = d(e) for every edge, or nothing.
std::optional<std::vector<Degree>> degree_coboundary_solve(const KGraph& g);

Cocycle2 character_apply(const Cocycle2& c, const Character& chi);
Cocycle2 exponentiate(const Cocycle2& c, const mpq_class& t);

struct CohomologousSolution {
  bool found = false;
  std::optional<OneCochain> b;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
};

/// Bounded search for b with delta^1 b = c - c2 on all pairs within bound.
CohomologousSolution cohomologous_solve(const Cocycle2& c, const Cocycle2& c2, const KGraph& g,
                                        const Degree& bound);

}  // namespace kgl
