#include "kgl/algebra.hpp"

#include <exception>
#include <set>

#include "kgl/error.hpp"

namespace kgl {

namespace {

// Adds a cocycle value to a group part; circle values become a phase on q.
AbelianValue absorb(const AbelianValue& base, const AbelianValue& twist, Scalar& q) {
  if (twist.group().is_circle()) {
    q *= twist.phase();
    return base;
  }
  if (twist.group().kind == GroupKind::Trivial) return base;
  return base + twist;
}

void check_paths(const KGraph& g, const TermKey& k) {
  const int nv = g.num_vertices();
  if (k.left.range >= nv || k.left.source >= nv || k.right.range >= nv || k.right.source >= nv ||
      static_cast<int>(k.left.degree.size()) != g.rank())
    throw Error(ErrorKind::GraphMismatch, "term does not belong to this graph");
}

void check_groups(const AlgebraElement& x, const AlgebraElement& y, const Cocycle2& c) {
  const ValueGroup want = algebra_group(c.group());
  if (!(x.group() == want) || !(y.group() == want))
    throw Error(ErrorKind::GroupMismatch, "element group does not match the cocycle",
                {{"left", x.group().name()}, {"right", y.group().name()}, {"cocycle", c.group().name()}});
}

using Product = std::vector<std::pair<TermKey, Scalar>>;

Product term_product(const KGraph& g, const Cocycle2& c, const TermKey& x, const Scalar& qx, const TermKey& y,
                     const Scalar& qy) {
  Product out;
  const Path& lambda = x.left;
  const Path& mu = x.right;
  const Path& eta = y.left;
  const Path& zeta = y.right;
  for (const Path& ext : g.mce(mu, eta)) {
    const Path alpha = g.factorize(ext, mu.degree).second;
    const Path beta = g.factorize(ext, eta.degree).second;
    Scalar q = qx * qy;
    AbelianValue a = x.group + y.group;
    a = absorb(a, c(g, eta, beta), q);
    a = absorb(a, -c(g, mu, alpha), q);
    a = absorb(a, c(g, lambda, alpha), q);
    a = absorb(a, -c(g, zeta, beta), q);
    out.push_back({TermKey{g.compose(lambda, alpha), a, g.compose(zeta, beta)}, q});
  }
  return out;
}

}  // namespace

ValueGroup algebra_group(const ValueGroup& cg) { return cg.is_circle() ? ValueGroup::trivial() : cg; }

Degree grading(const TermKey& key) { return key.left.degree - key.right.degree; }

AlgebraElement AlgebraElement::term(const Path& left, const AbelianValue& a, const Path& right, const Scalar& q) {
  if (left.source != right.source)
    throw Error(ErrorKind::NotComposable, "spanning term needs s(lambda) = s(mu)");
  AlgebraElement x(a.group());
  x.add(TermKey{left, a, right}, q);
  return x;
}

AlgebraElement AlgebraElement::vertex(const KGraph& g, int v, const ValueGroup& group) {
  return term(g.vertex(v), AbelianValue::zero(group), g.vertex(v));
}

AlgebraElement AlgebraElement::s(const KGraph& g, const Path& lambda, const ValueGroup& group) {
  return term(lambda, AbelianValue::zero(group), g.vertex(lambda.source));
}

AlgebraElement AlgebraElement::s_star(const KGraph& g, const Path& lambda, const ValueGroup& group) {
  return term(g.vertex(lambda.source), AbelianValue::zero(group), lambda);
}

void AlgebraElement::add(const TermKey& key, const Scalar& q) {
  if (!(key.group.group() == group_))
    throw Error(ErrorKind::GroupMismatch, "term group does not match the element",
                {{"term", key.group.group().name()}, {"element", group_.name()}});
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    if (!q.is_zero()) terms_.emplace(key, q);
    return;
  }
  it->second += q;
  if (it->second.is_zero()) terms_.erase(it);
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  if (!(o.group_ == group_)) throw Error(ErrorKind::GroupMismatch, "adding elements over different groups");
  for (const auto& [k, q] : o.terms_) add(k, q);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  if (!(o.group_ == group_)) throw Error(ErrorKind::GroupMismatch, "subtracting elements over different groups");
  for (const auto& [k, q] : o.terms_) add(k, -q);
  return *this;
}

AlgebraElement AlgebraElement::scaled(const Scalar& q) const {
  AlgebraElement out(group_);
  for (const auto& [k, v] : terms_) out.add(k, v * q);
  return out;
}

std::vector<Degree> AlgebraElement::gradings() const {
  std::set<Degree> s;
  for (const auto& [k, q] : terms_) s.insert(grading(k));
  return {s.begin(), s.end()};
}

nlohmann::json AlgebraElement::to_json(const KGraph& g) const {
  auto path_json = [&](const Path& p) -> nlohmann::json {
    if (p.is_vertex()) return {{"vertex", g.skeleton().vertices[p.range]}};
    return g.edge_ids(p);
  };
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, q] : terms_) {
    nlohmann::json t = q.to_json();
    t["left"] = path_json(k.left);
    t["right"] = path_json(k.right);
    t["group"] = k.group.to_json();
    terms.push_back(t);
  }
  return {{"group_type", group_.to_json()}, {"terms", terms}};
}

AlgebraElement AlgebraElement::from_json(const nlohmann::json& j, const KGraph& g, const ValueGroup& group) {
  AlgebraElement x(group);
  try {
    for (const auto& t : j.at("terms")) {
      Path left = path_from_json(g, t.at("left"));
      Path right = path_from_json(g, t.at("right"));
      if (left.source != right.source) throw Error(ErrorKind::NotComposable, "term needs s(left) = s(right)");
      AbelianValue a = t.contains("group") ? AbelianValue::from_json(group, t.at("group")) : AbelianValue::zero(group);
      x.add(TermKey{left, a, right}, Scalar::from_json(t));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::ParseError, std::string("malformed algebra element: ") + ex.what());
  }
  return x;
}

AlgebraElement star_product_serial(const KGraph& g, const AlgebraElement& x, const AlgebraElement& y,
                                   const Cocycle2& c) {
  check_groups(x, y, c);
  AlgebraElement out(x.group());
  for (const auto& [kx, qx] : x.terms()) {
    check_paths(g, kx);
    for (const auto& [ky, qy] : y.terms()) {
      check_paths(g, ky);
      for (auto& [k, q] : term_product(g, c, kx, qx, ky, qy)) out.add(k, q);
    }
  }
  return out;
}

AlgebraElement star_product(const KGraph& g, const AlgebraElement& x, const AlgebraElement& y, const Cocycle2& c) {
  check_groups(x, y, c);
  std::vector<const std::pair<const TermKey, Scalar>*> xs, ys;
  for (const auto& t : x.terms()) {
    check_paths(g, t.first);
    xs.push_back(&t);
  }
  for (const auto& t : y.terms()) {
    check_paths(g, t.first);
    ys.push_back(&t);
  }
  const long total = static_cast<long>(xs.size() * ys.size());
  std::vector<Product> parts(static_cast<std::size_t>(total));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (long idx = 0; idx < total; ++idx) {
    try {
      const auto* a = xs[static_cast<std::size_t>(idx) / ys.size()];
      const auto* b = ys[static_cast<std::size_t>(idx) % ys.size()];
      parts[static_cast<std::size_t>(idx)] = term_product(g, c, a->first, a->second, b->first, b->second);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  AlgebraElement out(x.group());
  for (const Product& p : parts)
    for (const auto& [k, q] : p) out.add(k, q);
  return out;
}

AlgebraElement involution(const AlgebraElement& x) {
  AlgebraElement out(x.group());
  for (const auto& [k, q] : x.terms()) out.add(TermKey{k.right, -k.group, k.left}, q.conj());
  return out;
}

AlgebraElement expand_to_level(const KGraph& g, const AlgebraElement& x, const Cocycle2& c, const Degree& level) {
  AlgebraElement out(x.group());
  for (const auto& [k, q] : x.terms()) {
    if (!leq(k.left.degree, level))
      throw Error(ErrorKind::LevelTooLow, "level is below a left degree",
                  {{"level", to_string(level)}, {"degree", to_string(k.left.degree)}});
    for (const Path& nu : g.paths(level - k.left.degree, k.left.source)) {
      Scalar qq = q;
      AbelianValue a = absorb(k.group, c(g, k.left, nu), qq);
      a = absorb(a, -c(g, k.right, nu), qq);
      out.add(TermKey{g.compose(k.left, nu), a, g.compose(k.right, nu)}, qq);
    }
  }
  return out;
}

bool equals(const KGraph& g, const AlgebraElement& x, const AlgebraElement& y, const Cocycle2& c) {
  if (!(x.group() == y.group())) return false;
  AlgebraElement z = x - y;
  std::map<Degree, AlgebraElement> pieces;
  for (const auto& [k, q] : z.terms()) {
    auto it = pieces.try_emplace(grading(k), AlgebraElement(z.group())).first;
    it->second.add(k, q);
  }
  for (const auto& [m, piece] : pieces) {
    Degree level = zero_degree(g.rank());
    for (const auto& [k, q] : piece.terms()) level = join(level, k.left.degree);
    if (!expand_to_level(g, piece, c, level).is_zero()) return false;
  }
  return true;
}

AlgebraElement specialize(const AlgebraElement& x, const Character& chi) {
  if (!chi.accepts(x.group()))
    throw Error(ErrorKind::GroupMismatch, "character does not match the element group", {{"group", x.group().name()}});
  AlgebraElement out(ValueGroup::trivial());
  for (const auto& [k, q] : x.terms()) {
    Scalar qq = q * chi.apply(k.group).phase();
    out.add(TermKey{k.left, AbelianValue::zero(ValueGroup::trivial()), k.right}, qq);
  }
  return out;
}

AlgebraElement cohomologous_map(const KGraph& g, const AlgebraElement& x, const OneCochain& b) {
  AlgebraElement out(x.group());
  for (const auto& [k, q] : x.terms()) {
    Scalar qq = q;
    AbelianValue a = absorb(k.group, b(g, k.left), qq);
    a = absorb(a, -b(g, k.right), qq);
    out.add(TermKey{k.left, a, k.right}, qq);
  }
  return out;
}

}  // namespace kgl
