#include "kgl/cocycle.hpp"

#include <algorithm>
#include <deque>

#include "kgl/error.hpp"
#include "kgl/snf.hpp"

namespace kgl {

// ---------------------------------------------------------------- groups

std::string ValueGroup::name() const {
  switch (kind) {
    case GroupKind::Trivial: return "trivial";
    case GroupKind::FreeAbelian: return "free_abelian(" + std::to_string(rank) + ")";
    case GroupKind::Int: return "int";
    case GroupKind::Rat: return "rat";
    case GroupKind::CircleTurns: return "circle_turns";
    case GroupKind::CircleRadians: return "circle_radians";
  }
  return "?";
}

nlohmann::json ValueGroup::to_json() const {
  switch (kind) {
    case GroupKind::Trivial: return {{"type", "trivial"}};
    case GroupKind::FreeAbelian: return {{"type", "free_abelian"}, {"rank", rank}};
    case GroupKind::Int: return {{"type", "int"}};
    case GroupKind::Rat: return {{"type", "rat"}};
    case GroupKind::CircleTurns: return {{"type", "circle_turns"}};
    case GroupKind::CircleRadians: return {{"type", "circle_radians"}};
  }
  return {};
}

ValueGroup ValueGroup::from_json(const nlohmann::json& j) {
  std::string t = j.at("type").get<std::string>();
  if (t == "trivial") return trivial();
  if (t == "free_abelian") return free_abelian(j.at("rank").get<int>());
  if (t == "int") return integers();
  if (t == "rat") return rationals();
  if (t == "circle_turns" || t == "turns") return circle_turns();
  if (t == "circle_radians" || t == "radians") return circle_radians();
  throw Error(ErrorKind::ParseError, "unknown value group '" + t + "'");
}

// ---------------------------------------------------------------- values

namespace {

std::size_t width(const ValueGroup& g) {
  switch (g.kind) {
    case GroupKind::Trivial: return 0;
    case GroupKind::FreeAbelian: return static_cast<std::size_t>(g.rank);
    default: return 1;
  }
}

void require_same(const ValueGroup& a, const ValueGroup& b) {
  if (!(a == b))
    throw Error(ErrorKind::GroupMismatch, "value groups differ", {{"left", a.name()}, {"right", b.name()}});
}

mpq_class mod_one(mpq_class q) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  q -= fl;
  q.canonicalize();
  return q;
}

}  // namespace

void AbelianValue::normalize() {
  if (group_.kind == GroupKind::CircleTurns)
    for (auto& x : v_) x = mod_one(x);
  for (auto& x : v_) x.canonicalize();
}

AbelianValue AbelianValue::zero(const ValueGroup& g) {
  AbelianValue a;
  a.group_ = g;
  a.v_.assign(width(g), 0);
  return a;
}

AbelianValue AbelianValue::free(const std::vector<mpz_class>& v) {
  AbelianValue a;
  a.group_ = ValueGroup::free_abelian(static_cast<int>(v.size()));
  for (const auto& x : v) a.v_.emplace_back(x);
  return a;
}

AbelianValue AbelianValue::generator(int rank, int index) {
  std::vector<mpz_class> v(static_cast<std::size_t>(rank), 0);
  v.at(static_cast<std::size_t>(index)) = 1;
  return free(v);
}

AbelianValue AbelianValue::integer(const mpz_class& n) {
  AbelianValue a;
  a.group_ = ValueGroup::integers();
  a.v_ = {mpq_class(n)};
  return a;
}

AbelianValue AbelianValue::rat(const mpq_class& q) {
  AbelianValue a;
  a.group_ = ValueGroup::rationals();
  a.v_ = {q};
  a.normalize();
  return a;
}

AbelianValue AbelianValue::turns(const mpq_class& q) {
  AbelianValue a;
  a.group_ = ValueGroup::circle_turns();
  a.v_ = {q};
  a.normalize();
  return a;
}

AbelianValue AbelianValue::radians(const mpq_class& r) {
  AbelianValue a;
  a.group_ = ValueGroup::circle_radians();
  a.v_ = {r};
  a.normalize();
  return a;
}

bool AbelianValue::is_zero() const {
  return std::all_of(v_.begin(), v_.end(), [](const mpq_class& x) { return x == 0; });
}

AbelianValue AbelianValue::operator-() const {
  AbelianValue a = *this;
  for (auto& x : a.v_) x = -x;
  a.normalize();
  return a;
}

AbelianValue& AbelianValue::operator+=(const AbelianValue& o) {
  require_same(group_, o.group_);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  normalize();
  return *this;
}

AbelianValue& AbelianValue::operator-=(const AbelianValue& o) { return *this += -o; }

AbelianValue AbelianValue::times(const mpz_class& n) const {
  AbelianValue a = *this;
  for (auto& x : a.v_) x *= n;
  a.normalize();
  return a;
}

bool AbelianValue::operator==(const AbelianValue& o) const { return group_ == o.group_ && v_ == o.v_; }

bool AbelianValue::operator<(const AbelianValue& o) const {
  if (group_.kind != o.group_.kind) return group_.kind < o.group_.kind;
  if (group_.rank != o.group_.rank) return group_.rank < o.group_.rank;
  return std::lexicographical_compare(v_.begin(), v_.end(), o.v_.begin(), o.v_.end());
}

Scalar AbelianValue::phase() const {
  switch (group_.kind) {
    case GroupKind::Trivial: return Scalar(1);
    case GroupKind::CircleTurns: return Scalar::turn(v_[0]);
    case GroupKind::CircleRadians: {
      if (v_[0] == 0) return Scalar(1);
      double r = v_[0].get_d();
      return Scalar::approx({std::cos(r), std::sin(r)});
    }
    default:
      throw Error(ErrorKind::WrongValueGroup, "only circle values have a phase", {{"group", group_.name()}});
  }
}

nlohmann::json AbelianValue::to_json() const {
  switch (group_.kind) {
    case GroupKind::Trivial: return 0;
    case GroupKind::FreeAbelian: {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& x : v_) {
        mpz_class z = x.get_num();
        if (z.fits_slong_p())
          a.push_back(z.get_si());
        else
          a.push_back(z.get_str());
      }
      return a;
    }
    case GroupKind::Int: {
      mpz_class z = v_[0].get_num();
      if (z.fits_slong_p()) return z.get_si();
      return z.get_str();
    }
    default: return rational_to_string(v_[0]);
  }
}

AbelianValue AbelianValue::from_json(const ValueGroup& g, const nlohmann::json& j) {
  auto integral = [](const mpq_class& q) {
    if (q.get_den() != 1) throw Error(ErrorKind::ParseError, "expected an integer value");
    return mpz_class(q.get_num());
  };
  switch (g.kind) {
    case GroupKind::Trivial: return zero(g);
    case GroupKind::FreeAbelian: {
      if (!j.is_array() || static_cast<int>(j.size()) != g.rank)
        throw Error(ErrorKind::ParseError, "free abelian value has the wrong length", {{"value", j}});
      std::vector<mpz_class> v;
      for (const auto& x : j) v.push_back(integral(rational_from_json(x)));
      return free(v);
    }
    case GroupKind::Int: return integer(integral(rational_from_json(j)));
    case GroupKind::Rat: return rat(rational_from_json(j));
    case GroupKind::CircleTurns: return turns(rational_from_json(j));
    case GroupKind::CircleRadians: return radians(rational_from_json(j));
  }
  return zero(g);
}

std::string AbelianValue::to_string() const { return to_json().dump(); }

// ---------------------------------------------------------------- characters

Character Character::torus(std::vector<mpq_class> turns) {
  Character c;
  c.kind_ = Kind::TorusPoint;
  c.turns_ = std::move(turns);
  return c;
}

Character Character::integer(const mpq_class& z_turns) {
  Character c;
  c.kind_ = Kind::IntChar;
  c.param_ = z_turns;
  return c;
}

Character Character::real(const mpq_class& t) {
  Character c;
  c.kind_ = Kind::RealChar;
  c.param_ = t;
  return c;
}

Character Character::evaluation() { return Character{}; }

bool Character::accepts(const ValueGroup& g) const {
  if (g.kind == GroupKind::Trivial) return true;
  switch (kind_) {
    case Kind::TorusPoint: return g.kind == GroupKind::FreeAbelian && g.rank == static_cast<int>(turns_.size());
    case Kind::IntChar: return g.kind == GroupKind::Int;
    case Kind::RealChar: return g.kind == GroupKind::Rat;
    case Kind::Evaluation: return g.is_circle();
  }
  return false;
}

ValueGroup Character::target(const ValueGroup& source) const {
  if (kind_ == Kind::RealChar) return ValueGroup::circle_radians();
  if (kind_ == Kind::Evaluation && source.is_circle()) return source;
  return ValueGroup::circle_turns();
}

AbelianValue Character::apply(const AbelianValue& a) const {
  const ValueGroup& g = a.group();
  if (!accepts(g))
    throw Error(ErrorKind::GroupMismatch, "character does not match the value group", {{"group", g.name()}});
  if (g.kind == GroupKind::Trivial) return AbelianValue::zero(target(g));
  switch (kind_) {
    case Kind::TorusPoint: {
      mpq_class s = 0;
      for (std::size_t i = 0; i < turns_.size(); ++i) s += a.entries()[i] * turns_[i];
      return AbelianValue::turns(s);
    }
    case Kind::IntChar: return AbelianValue::turns(a.entries()[0] * param_);
    case Kind::RealChar: return AbelianValue::radians(a.entries()[0] * param_);
    case Kind::Evaluation: return a;
  }
  return a;
}

nlohmann::json Character::to_json() const {
  switch (kind_) {
    case Kind::TorusPoint: {
      nlohmann::json t = nlohmann::json::array();
      for (const auto& q : turns_) t.push_back(rational_to_string(q));
      return {{"type", "torus"}, {"turns", t}};
    }
    case Kind::IntChar: return {{"type", "int"}, {"z", rational_to_string(param_)}};
    case Kind::RealChar: return {{"type", "real"}, {"t", rational_to_string(param_)}};
    case Kind::Evaluation: return {{"type", "evaluation"}};
  }
  return {};
}

Character Character::from_json(const nlohmann::json& j) {
  std::string t = j.at("type").get<std::string>();
  if (t == "torus") {
    std::vector<mpq_class> turns;
    for (const auto& x : j.at("turns")) turns.push_back(rational_from_json(x));
    return torus(turns);
  }
  if (t == "int") return integer(rational_from_json(j.at("z")));
  if (t == "real") return real(rational_from_json(j.at("t")));
  if (t == "evaluation") return evaluation();
  throw Error(ErrorKind::ParseError, "unknown character type '" + t + "'");
}

// ---------------------------------------------------------------- 1-cochains

struct OneCochain::Node {
  enum class Kind { Zero, Table, DegreeAdditive, VertexCoboundary, Rule, Composed } kind = Kind::Zero;
  ValueGroup group;
  std::map<Path, AbelianValue> table;
  Degree bound;
  std::vector<AbelianValue> values;
  Rule rule;
  std::shared_ptr<const Node> base;
  Character chi;
};

OneCochain OneCochain::zero(const ValueGroup& g) {
  OneCochain b;
  auto n = std::make_shared<Node>();
  n->group = g;
  b.node_ = n;
  return b;
}

OneCochain OneCochain::table(const ValueGroup& g, std::map<Path, AbelianValue> values, Degree bound) {
  OneCochain b;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Table;
  n->group = g;
  for (auto& [p, v] : values) require_same(g, v.group());
  n->table = std::move(values);
  n->bound = std::move(bound);
  b.node_ = n;
  return b;
}

OneCochain OneCochain::degree_additive(const ValueGroup& g, std::vector<AbelianValue> per_color) {
  OneCochain b;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::DegreeAdditive;
  n->group = g;
  for (auto& v : per_color) require_same(g, v.group());
  n->values = std::move(per_color);
  b.node_ = n;
  return b;
}

OneCochain OneCochain::vertex_coboundary(const ValueGroup& g, std::vector<AbelianValue> b0) {
  OneCochain b;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::VertexCoboundary;
  n->group = g;
  for (auto& v : b0) require_same(g, v.group());
  n->values = std::move(b0);
  b.node_ = n;
  return b;
}

OneCochain OneCochain::rule(const ValueGroup& g, Rule r) {
  OneCochain b;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Rule;
  n->group = g;
  n->rule = std::move(r);
  b.node_ = n;
  return b;
}

const ValueGroup& OneCochain::group() const { return node_->group; }

OneCochain OneCochain::composed(const Character& chi) const {
  if (!chi.accepts(group()))
    throw Error(ErrorKind::GroupMismatch, "character does not match the cochain group", {{"group", group().name()}});
  OneCochain b;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Composed;
  n->group = chi.target(group());
  n->base = node_;
  n->chi = chi;
  b.node_ = n;
  return b;
}

namespace {

AbelianValue eval_cochain(const OneCochain::Node& n, const KGraph& g, const Path& p) {
  using K = OneCochain::Node::Kind;
  if (p.is_vertex()) return AbelianValue::zero(n.group);
  switch (n.kind) {
    case K::Zero: return AbelianValue::zero(n.group);
    case K::Table: {
      if (!leq(p.degree, n.bound))
        throw Error(ErrorKind::PartialTableMiss, "cochain table queried beyond its bound",
                    {{"degree", to_string(p.degree)}, {"bound", to_string(n.bound)}});
      auto it = n.table.find(p);
      return it == n.table.end() ? AbelianValue::zero(n.group) : it->second;
    }
    case K::DegreeAdditive: {
      AbelianValue s = AbelianValue::zero(n.group);
      for (std::size_t i = 0; i < n.values.size() && i < p.degree.size(); ++i)
        s += n.values[i].times(mpz_class(static_cast<long>(p.degree[i])));
      return s;
    }
    case K::VertexCoboundary: return n.values.at(p.source) - n.values.at(p.range);
    case K::Rule: return n.rule(g, p);
    case K::Composed: return n.chi.apply(eval_cochain(*n.base, g, p));
  }
  return AbelianValue::zero(n.group);
}

}  // namespace

AbelianValue OneCochain::operator()(const KGraph& g, const Path& p) const { return eval_cochain(*node_, g, p); }

nlohmann::json OneCochain::to_json(const KGraph& g) const {
  using K = Node::Kind;
  const Node& n = *node_;
  nlohmann::json j;
  j["group"] = n.group.to_json();
  switch (n.kind) {
    case K::Zero: j["type"] = "zero"; break;
    case K::Table: {
      j["type"] = "table";
      j["bound"] = n.bound;
      j["entries"] = nlohmann::json::array();
      for (const auto& [p, v] : n.table) j["entries"].push_back({{"path", path_to_json(g, p)}, {"value", v.to_json()}});
      break;
    }
    case K::DegreeAdditive: {
      j["type"] = "degree";
      j["values"] = nlohmann::json::array();
      for (const auto& v : n.values) j["values"].push_back(v.to_json());
      break;
    }
    case K::VertexCoboundary: {
      j["type"] = "vertex";
      j["values"] = nlohmann::json::object();
      for (std::size_t v = 0; v < n.values.size(); ++v) j["values"][g.skeleton().vertices[v]] = n.values[v].to_json();
      break;
    }
    case K::Rule:
      throw Error(ErrorKind::Unsupported, "rule-based cochains have no JSON form");
    case K::Composed: {
      OneCochain base;
      base.node_ = n.base;
      j["type"] = "composed";
      j["base"] = base.to_json(g);
      j["character"] = n.chi.to_json();
      break;
    }
  }
  return j;
}

OneCochain OneCochain::from_json(const nlohmann::json& j, const KGraph& g) {
  ValueGroup grp = ValueGroup::from_json(j.at("group"));
  std::string t = j.at("type").get<std::string>();
  if (t == "zero") return zero(grp);
  if (t == "table") {
    std::map<Path, AbelianValue> vals;
    for (const auto& e : j.at("entries")) vals[path_from_json(g, e.at("path"))] = AbelianValue::from_json(grp, e.at("value"));
    return table(grp, std::move(vals), j.at("bound").get<Degree>());
  }
  if (t == "degree") {
    std::vector<AbelianValue> vals;
    for (const auto& v : j.at("values")) vals.push_back(AbelianValue::from_json(grp, v));
    return degree_additive(grp, vals);
  }
  if (t == "vertex") {
    std::vector<AbelianValue> vals(static_cast<std::size_t>(g.num_vertices()), AbelianValue::zero(grp));
    for (const auto& [id, v] : j.at("values").items()) vals[g.vertex_index(id)] = AbelianValue::from_json(grp, v);
    return vertex_coboundary(grp, vals);
  }
  if (t == "composed") return from_json(j.at("base"), g).composed(Character::from_json(j.at("character")));
  throw Error(ErrorKind::ParseError, "unknown cochain type '" + t + "'");
}

// ---------------------------------------------------------------- 2-cocycles

struct Cocycle2::Node {
  Kind kind = Kind::DegreeBilinear;
  ValueGroup group;
  std::vector<std::vector<AbelianValue>> matrix;
  std::optional<OneCochain> b;
  PairTable table;
  Degree bound;
  std::vector<Cocycle2> terms;
  std::optional<KGraph> base_graph;
  std::vector<int> vertex_map;
  std::vector<int> edge_map;
  std::optional<Character> chi;
};

Cocycle2 Cocycle2::zero(const ValueGroup& g, int k) {
  std::vector<std::vector<AbelianValue>> m(static_cast<std::size_t>(k),
                                           std::vector<AbelianValue>(static_cast<std::size_t>(k), AbelianValue::zero(g)));
  return degree_bilinear(g, std::move(m));
}

Cocycle2 Cocycle2::degree_bilinear(const ValueGroup& g, std::vector<std::vector<AbelianValue>> matrix) {
  for (const auto& row : matrix) {
    if (row.size() != matrix.size()) throw Error(ErrorKind::InvalidArgument, "bilinear matrix must be square");
    for (const auto& v : row) require_same(g, v.group());
  }
  Cocycle2 c;
  auto n = std::make_shared<Node>();
  n->kind = Kind::DegreeBilinear;
  n->group = g;
  n->matrix = std::move(matrix);
  c.node_ = n;
  return c;
}

Cocycle2 Cocycle2::coboundary(OneCochain b) {
  Cocycle2 c;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Coboundary;
  n->group = b.group();
  n->b = std::move(b);
  c.node_ = n;
  return c;
}

Cocycle2 Cocycle2::table(const ValueGroup& g, PairTable entries, Degree bound) {
  for (const auto& [k, v] : entries) require_same(g, v.group());
  Cocycle2 c;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Table;
  n->group = g;
  n->table = std::move(entries);
  n->bound = std::move(bound);
  c.node_ = n;
  return c;
}

Cocycle2 Cocycle2::sum(std::vector<Cocycle2> terms) {
  if (terms.empty()) throw Error(ErrorKind::InvalidArgument, "empty cocycle sum");
  for (const auto& t : terms) require_same(terms[0].group(), t.group());
  Cocycle2 c;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->group = terms[0].group();
  n->terms = std::move(terms);
  c.node_ = n;
  return c;
}

Cocycle2 Cocycle2::negated(Cocycle2 base) {
  Cocycle2 c;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Negated;
  n->group = base.group();
  n->terms = {std::move(base)};
  c.node_ = n;
  return c;
}

Cocycle2 Cocycle2::pullback(Cocycle2 base, KGraph base_graph, std::vector<int> vertex_map, std::vector<int> edge_map) {
  Cocycle2 c;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pullback;
  n->group = base.group();
  n->terms = {std::move(base)};
  n->base_graph = std::move(base_graph);
  n->vertex_map = std::move(vertex_map);
  n->edge_map = std::move(edge_map);
  c.node_ = n;
  return c;
}

Cocycle2::Kind Cocycle2::kind() const { return node_->kind; }
const ValueGroup& Cocycle2::group() const { return node_->group; }

std::optional<Degree> Cocycle2::bound() const {
  if (node_->kind == Kind::Table) return node_->bound;
  return std::nullopt;
}

const std::vector<std::vector<AbelianValue>>& Cocycle2::matrix() const { return node_->matrix; }

AbelianValue Cocycle2::operator()(const KGraph& g, const Path& a, const Path& b) const {
  if (a.source != b.range)
    throw Error(ErrorKind::NotComposable, "cocycle evaluated on a non-composable pair",
                {{"a", g.describe(a)}, {"b", g.describe(b)}});
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::DegreeBilinear: {
      AbelianValue s = AbelianValue::zero(n.group);
      for (std::size_t i = 0; i < n.matrix.size(); ++i) {
        if (a.degree[i] == 0) continue;
        for (std::size_t j = 0; j < n.matrix.size(); ++j) {
          if (b.degree[j] == 0 || n.matrix[i][j].is_zero()) continue;
          s += n.matrix[i][j].times(mpz_class(static_cast<long>(a.degree[i] * b.degree[j])));
        }
      }
      return s;
    }
    case Kind::Coboundary: {
      const OneCochain& b1 = *n.b;
      return b1(g, a) - b1(g, g.compose(a, b)) + b1(g, b);
    }
    case Kind::Table: {
      if (!leq(a.degree + b.degree, n.bound))
        throw Error(ErrorKind::PartialTableMiss, "cocycle table queried beyond its bound",
                    {{"degree", to_string(a.degree + b.degree)}, {"bound", to_string(n.bound)}});
      auto it = n.table.find({a, b});
      return it == n.table.end() ? AbelianValue::zero(n.group) : it->second;
    }
    case Kind::Sum: {
      AbelianValue s = AbelianValue::zero(n.group);
      for (const auto& t : n.terms) s += t(g, a, b);
      return s;
    }
    case Kind::Negated: return -n.terms[0](g, a, b);
    case Kind::Pullback: {
      const KGraph& bg = *n.base_graph;
      auto map_path = [&](const Path& p) {
        Path q{n.vertex_map.at(p.range), n.vertex_map.at(p.source), p.degree, {}};
        for (int e : p.edges) q.edges.push_back(n.edge_map.at(e));
        return q;
      };
      return n.terms[0](bg, map_path(a), map_path(b));
    }
    case Kind::Composed: return n.chi->apply(n.terms[0](g, a, b));
  }
  return AbelianValue::zero(n.group);
}

Cocycle2 operator+(const Cocycle2& a, const Cocycle2& b) { return Cocycle2::sum({a, b}); }
Cocycle2 operator-(const Cocycle2& a, const Cocycle2& b) { return Cocycle2::sum({a, Cocycle2::negated(b)}); }

nlohmann::json Cocycle2::to_json(const KGraph& g) const {
  const Node& n = *node_;
  nlohmann::json j;
  switch (n.kind) {
    case Kind::DegreeBilinear: {
      j["type"] = "degree_bilinear";
      j["group"] = n.group.to_json();
      j["matrix"] = nlohmann::json::array();
      for (const auto& row : n.matrix) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& v : row) r.push_back(v.to_json());
        j["matrix"].push_back(r);
      }
      break;
    }
    case Kind::Coboundary:
      j["type"] = "coboundary";
      j["b"] = n.b->to_json(g);
      break;
    case Kind::Table: {
      j["type"] = "table";
      j["group"] = n.group.to_json();
      j["bound"] = n.bound;
      j["entries"] = nlohmann::json::array();
      for (const auto& [k, v] : n.table)
        j["entries"].push_back(
            {{"left", path_to_json(g, k.first)}, {"right", path_to_json(g, k.second)}, {"value", v.to_json()}});
      break;
    }
    case Kind::Sum:
      j["type"] = "sum";
      j["terms"] = nlohmann::json::array();
      for (const auto& t : n.terms) j["terms"].push_back(t.to_json(g));
      break;
    case Kind::Negated:
      j["type"] = "negated";
      j["base"] = n.terms[0].to_json(g);
      break;
    case Kind::Pullback:
      j["type"] = "pullback";
      j["base"] = n.terms[0].to_json(*n.base_graph);
      break;
    case Kind::Composed:
      j["type"] = "composed";
      j["base"] = n.terms[0].to_json(g);
      j["character"] = n.chi->to_json();
      break;
  }
  return j;
}

Cocycle2 Cocycle2::from_json(const nlohmann::json& j, const KGraph& g) {
  try {
    std::string t = j.at("type").get<std::string>();
    if (t == "degree_bilinear") {
      ValueGroup grp = ValueGroup::from_json(j.at("group"));
      std::vector<std::vector<AbelianValue>> m;
      for (const auto& row : j.at("matrix")) {
        std::vector<AbelianValue> r;
        for (const auto& v : row) r.push_back(AbelianValue::from_json(grp, v));
        m.push_back(std::move(r));
      }
      if (static_cast<int>(m.size()) != g.rank())
        throw Error(ErrorKind::ParseError, "bilinear matrix size does not match the graph rank");
      return degree_bilinear(grp, std::move(m));
    }
    if (t == "coboundary") return coboundary(OneCochain::from_json(j.at("b"), g));
    if (t == "table") {
      ValueGroup grp = ValueGroup::from_json(j.at("group"));
      PairTable entries;
      for (const auto& e : j.at("entries")) {
        Path a = path_from_json(g, e.at("left"));
        Path b = path_from_json(g, e.at("right"));
        if (a.source != b.range) throw Error(ErrorKind::NotComposable, "table entry is not a composable pair");
        entries[{a, b}] = AbelianValue::from_json(grp, e.at("value"));
      }
      return table(grp, std::move(entries), j.at("bound").get<Degree>());
    }
    if (t == "sum") {
      std::vector<Cocycle2> terms;
      for (const auto& x : j.at("terms")) terms.push_back(from_json(x, g));
      return sum(std::move(terms));
    }
    if (t == "negated") return negated(from_json(j.at("base"), g));
    if (t == "composed") return character_apply(from_json(j.at("base"), g), Character::from_json(j.at("character")));
    throw Error(ErrorKind::ParseError, "unknown cocycle type '" + t + "'");
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::ParseError, std::string("malformed cocycle JSON: ") + ex.what());
  }
}

int torus_generator_index(int k, int i, int j) {
  int idx = 0;
  for (int a = 2; a <= k; ++a)
    for (int b = 1; b < a; ++b) {
      if (a == i && b == j) return idx;
      ++idx;
    }
  throw Error(ErrorKind::InvalidArgument, "torus generator needs 1 <= j < i <= k");
}

Cocycle2 torus_cocycle(int k) {
  const int m = k * (k - 1) / 2;
  ValueGroup grp = ValueGroup::free_abelian(m);
  std::vector<std::vector<AbelianValue>> B(static_cast<std::size_t>(k),
                                           std::vector<AbelianValue>(static_cast<std::size_t>(k), AbelianValue::zero(grp)));
  for (int i = 2; i <= k; ++i)
    for (int j = 1; j < i; ++j) B[i - 1][j - 1] = AbelianValue::generator(m, torus_generator_index(k, i, j));
  return Cocycle2::degree_bilinear(grp, std::move(B));
}

// ---------------------------------------------------------------- operations

AbelianValue eval_cocycle(const Cocycle2& c, const KGraph& g, const Path& a, const Path& b) { return c(g, a, b); }

VerifyResult verify_cocycle(const Cocycle2& c, const KGraph& g, const Degree& bound, bool allow_certificate) {
  VerifyResult r;
  if (allow_certificate && c.kind() == Cocycle2::Kind::DegreeBilinear) {
    r.certificate = "degree-bilinear: the identity follows from bilinearity in degrees";
    return r;
  }
  std::vector<Path> all = g.paths_below(bound);
  for (const Path& p : all) {
    if (!c(g, p, g.vertex(p.source)).is_zero() || !c(g, g.vertex(p.range), p).is_zero()) {
      r.ok = false;
      r.normalization_failure = p;
      return r;
    }
  }
  std::vector<std::vector<const Path*>> by_range(static_cast<std::size_t>(g.num_vertices()));
  for (const Path& p : all) by_range[p.range].push_back(&p);
  for (const Path& l : all) {
    const Degree rest1 = bound - l.degree;
    for (const Path* m : by_range[l.source]) {
      if (!leq(m->degree, rest1)) continue;
      const Degree rest2 = rest1 - m->degree;
      const Path lm = g.compose(l, *m);
      const AbelianValue clm = c(g, l, *m);
      for (const Path* n : by_range[m->source]) {
        if (!leq(n->degree, rest2)) continue;
        ++r.triples_checked;
        AbelianValue lhs = c(g, *m, *n) + c(g, l, g.compose(*m, *n));
        AbelianValue rhs = clm + c(g, lm, *n);
        if (!(lhs == rhs)) {
          r.ok = false;
          r.counterexample = std::array<Path, 3>{l, *m, *n};
          return r;
        }
      }
    }
  }
  r.certificate = "exhaustive check of all composable triples with total degree <= " + to_string(bound);
  return r;
}

OneCochain coboundary0(const ValueGroup& grp, std::vector<AbelianValue> b0) {
  return OneCochain::vertex_coboundary(grp, std::move(b0));
}

Cocycle2 coboundary1(const OneCochain& b) { return Cocycle2::coboundary(b); }

std::optional<std::vector<Degree>> degree_coboundary_solve(const KGraph& g) {
  const int nv = g.num_vertices();
  const int k = g.rank();
  const auto& edges = g.skeleton().edges;
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(nv));
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    incident[edges[e].range].push_back(e);
    incident[edges[e].source].push_back(e);
  }
  std::vector<std::optional<Degree>> b(static_cast<std::size_t>(nv));
  for (int root = 0; root < nv; ++root) {
    if (b[root]) continue;
    b[root] = zero_degree(k);
    std::deque<int> queue{root};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int e : incident[v]) {
        const Edge& ed = edges[e];
        const Degree d = unit_degree(k, ed.color);
        // b(s(e)) - b(r(e)) = d(e)
        if (ed.range == v && !b[ed.source]) {
          b[ed.source] = *b[v] + d;
          queue.push_back(ed.source);
        } else if (ed.source == v && !b[ed.range]) {
          b[ed.range] = *b[v] - d;
          queue.push_back(ed.range);
        }
      }
    }
  }
  for (const Edge& ed : edges)
    if (*b[ed.source] - *b[ed.range] != unit_degree(k, ed.color)) return std::nullopt;
  std::vector<Degree> out;
  for (auto& x : b) out.push_back(*x);
  return out;
}

Cocycle2 character_apply(const Cocycle2& c, const Character& chi) {
  if (!chi.accepts(c.group()))
    throw Error(ErrorKind::GroupMismatch, "character does not match the cocycle group", {{"group", c.group().name()}});
  const Cocycle2::Node& n = *c.node_;
  switch (n.kind) {
    case Cocycle2::Kind::DegreeBilinear: {
      auto m = n.matrix;
      for (auto& row : m)
        for (auto& v : row) v = chi.apply(v);
      return Cocycle2::degree_bilinear(chi.target(n.group), std::move(m));
    }
    case Cocycle2::Kind::Coboundary: return Cocycle2::coboundary(n.b->composed(chi));
    case Cocycle2::Kind::Table: {
      Cocycle2::PairTable t;
      for (const auto& [k, v] : n.table) t[k] = chi.apply(v);
      return Cocycle2::table(chi.target(n.group), std::move(t), n.bound);
    }
    case Cocycle2::Kind::Sum: {
      std::vector<Cocycle2> terms;
      for (const auto& t : n.terms) terms.push_back(character_apply(t, chi));
      return Cocycle2::sum(std::move(terms));
    }
    case Cocycle2::Kind::Negated: return Cocycle2::negated(character_apply(n.terms[0], chi));
    case Cocycle2::Kind::Pullback:
      return Cocycle2::pullback(character_apply(n.terms[0], chi), *n.base_graph, n.vertex_map, n.edge_map);
    case Cocycle2::Kind::Composed: {
      Cocycle2 out;
      auto node = std::make_shared<Cocycle2::Node>();
      node->kind = Cocycle2::Kind::Composed;
      node->group = chi.target(n.group);
      node->terms = {c};
      node->chi = chi;
      out.node_ = node;
      return out;
    }
  }
  return c;
}

Cocycle2 exponentiate(const Cocycle2& c, const mpq_class& t) {
  if (c.group().kind != GroupKind::Rat)
    throw Error(ErrorKind::WrongValueGroup, "exponentiation needs a rational-valued cocycle", {{"group", c.group().name()}});
  return character_apply(c, Character::real(t));
}

CohomologousSolution cohomologous_solve(const Cocycle2& c, const Cocycle2& c2, const KGraph& g, const Degree& bound) {
  require_same(c.group(), c2.group());
  const ValueGroup grp = c.group();
  CohomologousSolution out;

  std::vector<Path> unknowns;
  std::map<Path, std::size_t> index;
  for (const Path& p : g.paths_below(bound)) {
    if (p.is_vertex()) continue;
    index.emplace(p, unknowns.size());
    unknowns.push_back(p);
  }
  out.unknowns = unknowns.size();

  // Normalisation: identities force (c - c2)(v, lambda) = (c - c2)(lambda, v) = 0.
  for (const Path& p : g.paths_below(bound)) {
    if (!(c(g, p, g.vertex(p.source)) == c2(g, p, g.vertex(p.source))) ||
        !(c(g, g.vertex(p.range), p) == c2(g, g.vertex(p.range), p)))
      return out;
  }

  BigMatrix M;
  std::vector<AbelianValue> rhs;
  for (const Path& a : unknowns) {
    for (const Path& b : unknowns) {
      if (a.source != b.range || !leq(a.degree + b.degree, bound)) continue;
      std::vector<mpz_class> row(unknowns.size(), 0);
      row[index.at(a)] += 1;
      row[index.at(g.compose(a, b))] -= 1;
      row[index.at(b)] += 1;
      M.push_back(std::move(row));
      rhs.push_back(c(g, a, b) - c2(g, a, b));
    }
  }
  out.equations = M.size();

  std::map<Path, AbelianValue> solution;
  for (const Path& p : unknowns) solution.emplace(p, AbelianValue::zero(grp));

  if (!M.empty() && !unknowns.empty()) {
    SmithForm snf = smith_normal_form(M);
    const std::size_t width_v = width(grp);
    std::vector<std::vector<mpq_class>> y(unknowns.size(), std::vector<mpq_class>(width_v, 0));
    for (std::size_t comp = 0; comp < width_v; ++comp) {
      // (U r) for this component, computed over Q.
      std::vector<mpq_class> ur(M.size(), 0);
      for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = 0; j < M.size(); ++j)
          if (snf.U[i][j] != 0) ur[i] += mpq_class(snf.U[i][j]) * rhs[j].entries()[comp];
      for (std::size_t i = 0; i < M.size(); ++i) {
        const bool pivot = i < snf.rank;
        switch (grp.kind) {
          case GroupKind::FreeAbelian:
          case GroupKind::Int: {
            if (!pivot) {
              if (ur[i] != 0) return out;
              break;
            }
            mpq_class q = ur[i] / mpq_class(snf.diagonal[i]);
            if (q.get_den() != 1) return out;
            y[i][comp] = q;
            break;
          }
          case GroupKind::CircleTurns: {
            if (!pivot) {
              if (mod_one(ur[i]) != 0) return out;
              break;
            }
            y[i][comp] = ur[i] / mpq_class(snf.diagonal[i]);
            break;
          }
          default: {
            if (!pivot) {
              if (ur[i] != 0) return out;
              break;
            }
            y[i][comp] = ur[i] / mpq_class(snf.diagonal[i]);
            break;
          }
        }
      }
    }
    // b = V y
    for (std::size_t r = 0; r < unknowns.size(); ++r) {
      std::vector<mpq_class> val(width_v, 0);
      for (std::size_t t = 0; t < unknowns.size(); ++t)
        if (snf.V[r][t] != 0)
          for (std::size_t comp = 0; comp < width_v; ++comp) val[comp] += mpq_class(snf.V[r][t]) * y[t][comp];
      AbelianValue a;
      switch (grp.kind) {
        case GroupKind::FreeAbelian: {
          std::vector<mpz_class> z;
          for (auto& q : val) z.push_back(q.get_num());
          a = AbelianValue::free(z);
          break;
        }
        case GroupKind::Int: a = AbelianValue::integer(val[0].get_num()); break;
        case GroupKind::Rat: a = AbelianValue::rat(val[0]); break;
        case GroupKind::CircleTurns: a = AbelianValue::turns(val[0]); break;
        case GroupKind::CircleRadians: a = AbelianValue::radians(val[0]); break;
        case GroupKind::Trivial: a = AbelianValue::zero(grp); break;
      }
      solution[unknowns[r]] = a;
    }
  }
  out.found = true;
  out.b = OneCochain::table(grp, std::move(solution), bound);
  return out;
}

}  // namespace kgl
