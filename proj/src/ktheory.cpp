#include "kgl/ktheory.hpp"

#include <sstream>

#include "kgl/error.hpp"

namespace kgl {

namespace {

BigMatrix to_big(const IntMatrix& a) {
  BigMatrix out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (auto x : a[i]) out[i].push_back(mpz_class(static_cast<long>(x)));
  return out;
}

// 1 - A^t
BigMatrix one_minus_transpose(const IntMatrix& a) {
  BigMatrix t = transpose(to_big(a));
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t[i].size(); ++j) t[i][j] = (i == j ? 1 : 0) - t[i][j];
  return t;
}

std::vector<mpz_class> basis_vector(std::size_t n, std::size_t i) {
  std::vector<mpz_class> e(n, 0);
  e[i] = 1;
  return e;
}

void attach_classes(FgAbelianGroup& grp, const Cokernel& ck, std::size_t n, std::size_t pad) {
  std::vector<mpz_class> unit(n, 1);
  for (std::size_t v = 0; v < n; ++v) {
    auto c = ck.coordinates(basis_vector(n, v));
    c.resize(c.size() + pad, 0);
    grp.vertex_classes.push_back(std::move(c));
  }
  auto u = ck.coordinates(unit);
  u.resize(u.size() + pad, 0);
  grp.unit_class = std::move(u);
}

nlohmann::json vec_json(const std::vector<mpz_class>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) {
    if (x.fits_slong_p()) out.push_back(x.get_si());
    else out.push_back(x.get_str());
  }
  return out;
}

std::string rat_string(const mpq_class& q) { return rational_to_string(q); }

}  // namespace

std::string FgAbelianGroup::describe() const {
  std::ostringstream os;
  bool first = true;
  if (rank > 0) {
    os << "Z";
    if (rank > 1) os << "^" << rank;
    first = false;
  }
  for (const auto& d : torsion) {
    os << (first ? "" : " + ") << "Z/" << d.get_str();
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

nlohmann::json FgAbelianGroup::to_json(const KGraph* g) const {
  nlohmann::json j;
  j["rank"] = rank;
  j["torsion"] = vec_json(torsion);
  j["group"] = describe();
  if (unit_class) j["unit_class"] = vec_json(*unit_class);
  if (!vertex_classes.empty()) {
    j["vertex_classes"] = nlohmann::json::object();
    for (std::size_t v = 0; v < vertex_classes.size(); ++v) {
      std::string name = g ? g->skeleton().vertices[v] : std::to_string(v);
      j["vertex_classes"][name] = vec_json(vertex_classes[v]);
    }
  }
  return j;
}

std::vector<mpz_class> Cokernel::coordinates(const std::vector<mpz_class>& x) const {
  const std::vector<mpz_class> y = apply(snf.U, x);
  std::vector<mpz_class> out;
  for (std::size_t i = 0; i < snf.rank; ++i) {
    const mpz_class& d = snf.diagonal[i];
    if (d == 1) continue;
    mpz_class r = y[i] % d;
    if (r < 0) r += d;
    out.push_back(r);
  }
  for (std::size_t i = snf.rank; i < y.size(); ++i) out.push_back(y[i]);
  return out;
}

Cokernel cokernel(const BigMatrix& m, std::size_t n) {
  Cokernel ck;
  ck.snf = smith_normal_form(m.empty() ? zero_matrix(n, 0) : m);
  if (ck.snf.U.size() != n) ck.snf.U = identity_matrix(n);
  for (std::size_t i = 0; i < ck.snf.rank; ++i)
    if (ck.snf.diagonal[i] != 1) ck.group.torsion.push_back(ck.snf.diagonal[i]);
  ck.group.rank = n - ck.snf.rank;
  return ck;
}

std::vector<std::vector<mpz_class>> kernel_basis(const BigMatrix& m, std::size_t c) {
  SmithForm s = smith_normal_form(m);
  std::vector<std::vector<mpz_class>> out;
  const BigMatrix& V = s.V.size() == c ? s.V : identity_matrix(c);
  for (std::size_t j = s.rank; j < c; ++j) {
    std::vector<mpz_class> col(c);
    for (std::size_t i = 0; i < c; ++i) col[i] = V[i][j];
    out.push_back(std::move(col));
  }
  return out;
}

KGroups ktheory_rank1(const KGraph& g) {
  if (g.rank() != 1) throw Error(ErrorKind::UnsupportedRank, "rank-1 formula needs a 1-graph", {{"k", g.rank()}});
  if (!g.has_no_sources()) throw Error(ErrorKind::SourceVertex, "K-theory formula needs a graph without sources");
  const std::size_t n = static_cast<std::size_t>(g.num_vertices());
  const BigMatrix m = one_minus_transpose(g.adjacency()[0]);
  KGroups out;
  Cokernel ck = cokernel(m, n);
  out.k0 = ck.group;
  attach_classes(out.k0, ck, n, 0);
  out.k1.rank = kernel_basis(m, n).size();
  return out;
}

KGroups ktheory_rank2(const KGraph& g) {
  if (g.rank() != 2) throw Error(ErrorKind::UnsupportedRank, "rank-2 formula needs a 2-graph", {{"k", g.rank()}});
  if (!g.has_no_sources()) throw Error(ErrorKind::SourceVertex, "K-theory formula needs a graph without sources");
  const std::size_t n = static_cast<std::size_t>(g.num_vertices());
  const BigMatrix b1 = one_minus_transpose(g.adjacency()[0]);
  const BigMatrix b2 = one_minus_transpose(g.adjacency()[1]);

  BigMatrix d1 = zero_matrix(n, 2 * n);  // [1 - A1^t, 1 - A2^t]
  BigMatrix d2 = zero_matrix(2 * n, n);  // [A2^t - 1; 1 - A1^t]
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      d1[i][j] = b1[i][j];
      d1[i][n + j] = b2[i][j];
      d2[i][j] = -b2[i][j];
      d2[n + i][j] = b1[i][j];
    }

  KGroups out;
  Cokernel ck = cokernel(d1, n);
  const std::size_t ker2 = kernel_basis(d2, n).size();
  out.k0 = ck.group;
  out.k0.rank += ker2;
  attach_classes(out.k0, ck, n, ker2);

  // ker d1 is spanned by the trailing columns of V; rewrite im d2 in that basis.
  const SmithForm& s1 = ck.snf;
  const BigMatrix z = multiply(s1.V_inv, d2);
  BigMatrix x;
  for (std::size_t i = s1.rank; i < 2 * n; ++i) x.push_back(z[i]);
  for (std::size_t i = 0; i < s1.rank; ++i)
    for (const auto& e : z[i])
      if (e != 0) throw Error(ErrorKind::InvalidArgument, "internal: d1 d2 != 0; squares are inconsistent");
  out.k1 = cokernel(x, 2 * n - s1.rank).group;
  return out;
}

KGroups ktheory_untwisted(const KGraph& g) {
  if (g.rank() == 1) return ktheory_rank1(g);
  if (g.rank() == 2) return ktheory_rank2(g);
  throw Error(ErrorKind::UnsupportedRank, "untwisted K-theory is computed for k = 1, 2 only", {{"k", g.rank()}});
}

nlohmann::json AfDescriptor::to_json() const {
  return {{"block_counts", block_counts},
          {"connecting", connecting},
          {"stationary", stationary},
          {"K0", text},
          {"K1", {{"rank", 0}, {"torsion", nlohmann::json::array()}, {"group", "0"}}}};
}

AfDescriptor af_limit_descriptor(const AfReport& report) {
  if (report.b0.empty()) throw Error(ErrorKind::MissingCertificate, "no degree-coboundary certificate");
  AfDescriptor d;
  for (const AfStage& st : report.stages) d.block_counts.push_back(st.blocks.size());
  d.connecting = report.connecting;
  d.stationary = !d.connecting.empty();
  for (const IntMatrix& m : d.connecting) d.stationary = d.stationary && m == d.connecting.front();
  if (d.stationary) {
    const IntMatrix& b = d.connecting.front();
    if (b.size() == 1 && b[0].size() == 1) {
      d.text = "colim(Z -" + std::to_string(b[0][0]) + "-> Z)";
    } else {
      const std::string zn = "Z^" + std::to_string(b.size());
      d.text = "colim(" + zn + " -B-> " + zn + " -B-> ...), B = " + nlohmann::json(b).dump();
    }
  } else {
    d.text = "colim of the listed connecting matrices";
  }
  return d;
}

TwistSpec TwistSpec::untwisted() { return {}; }

TwistSpec TwistSpec::exponential(Cocycle2 c0, mpq_class t) {
  TwistSpec s;
  s.kind = Kind::Exponential;
  s.cocycle = std::move(c0);
  s.t = std::move(t);
  return s;
}

TwistSpec TwistSpec::via_character(Cocycle2 c, Character chi) {
  TwistSpec s;
  s.kind = Kind::Character;
  s.cocycle = std::move(c);
  s.character = std::move(chi);
  return s;
}

TwistSpec TwistSpec::degree_coboundary(Cocycle2 c) {
  TwistSpec s;
  s.kind = Kind::DegreeCoboundary;
  s.cocycle = std::move(c);
  return s;
}

TwistSpec TwistSpec::circle(Cocycle2 c) {
  TwistSpec s;
  s.kind = Kind::CircleNoLift;
  s.cocycle = std::move(c);
  return s;
}

Cocycle2 rational_functional(const Cocycle2& c, const std::vector<mpq_class>& weights) {
  if (c.kind() != Cocycle2::Kind::DegreeBilinear)
    throw Error(ErrorKind::Unsupported, "rational functionals apply to degree-bilinear cocycles only");
  const ValueGroup& grp = c.group();
  std::vector<std::vector<AbelianValue>> m;
  for (const auto& row : c.matrix()) {
    std::vector<AbelianValue> out;
    for (const AbelianValue& v : row) {
      mpq_class s = 0;
      if (grp.kind == GroupKind::FreeAbelian) {
        if (weights.size() != static_cast<std::size_t>(grp.rank))
          throw Error(ErrorKind::InvalidArgument, "one weight per generator is required", {{"rank", grp.rank}});
        for (std::size_t l = 0; l < weights.size(); ++l) s += weights[l] * v.entries()[l];
      } else if (grp.kind == GroupKind::Int || grp.kind == GroupKind::Rat) {
        if (weights.size() != 1) throw Error(ErrorKind::InvalidArgument, "one weight is required");
        s = weights[0] * v.entries()[0];
      } else if (grp.kind != GroupKind::Trivial) {
        throw Error(ErrorKind::WrongValueGroup, "cannot push this group to the rationals", {{"group", grp.name()}});
      }
      out.push_back(AbelianValue::rat(s));
    }
    m.push_back(std::move(out));
  }
  return Cocycle2::degree_bilinear(ValueGroup::rationals(), std::move(m));
}

namespace {

std::vector<CertificateStep> exp_certificate(const KGraph& g, const Cocycle2& c0, const mpq_class& t,
                                             const VerifyResult& vr) {
  const int k = g.rank();
  std::vector<CertificateStep> steps;
  steps.push_back({"EXP-REDUCTION",
                   "c0 is a real-valued 2-cocycle and the twist is exp(2 pi i t c0) with t = " + rat_string(t),
                   vr.ok, vr.certificate + " (" + c0.group().name() + ")"});
  steps.push_back({"CROSSED-PRODUCT-INDUCTION",
                   "the path s -> exp(2 pi i s t c0), s in [0,1], is induced through the skew product by Z^k",
                   vr.ok, "cited isomorphism; not recomputed"});
  steps.push_back({"CORNER-FULL-PROJECTION", "the vertex projections sum to a full projection (finite vertex set)",
                   g.num_vertices() > 0, std::to_string(g.num_vertices()) + " vertices"});
  steps.push_back({"CLASS-PRESERVATION", "[s_v]_0 corresponds to [s_v]_0 for every vertex v", vr.ok,
                   "vertex classes reported in the untwisted presentation"});
  steps.push_back({"UNITALITY", "the vertex set is finite, so both algebras are unital and unit classes correspond",
                   true, std::to_string(g.num_vertices()) + " vertices"});
  steps.push_back({"GRAPH-KTHEORY-FORMULA", "untwisted K-theory from the rank-k chain complex, k in {1, 2}",
                   k <= 2, "k = " + std::to_string(k)});
  return steps;
}

}  // namespace

TwistedKTheory twisted_ktheory_reduce(const KGraph& g, const TwistSpec& spec) {
  TwistedKTheory out;
  const int k = g.rank();
  using Kind = TwistSpec::Kind;

  if (spec.kind == Kind::CircleNoLift)
    throw Error(ErrorKind::Unsupported, "circle-valued cocycle without a real lift; the reduction needs exp(2 pi i t c0)",
                {{"group", spec.cocycle ? spec.cocycle->group().name() : "none"}});

  if (spec.kind == Kind::DegreeCoboundary) {
    auto b0 = degree_coboundary_solve(g);
    if (!b0) throw Error(ErrorKind::MissingCertificate, "the degree map is not a coboundary on this graph");
    std::int64_t top = 0;
    for (const Degree& d : *b0)
      for (auto x : d) top = std::max(top, x);
    std::vector<Degree> stages;
    for (std::int64_t j = 0; j <= top; ++j) stages.push_back(ones(k, j));
    const Cocycle2 c = spec.cocycle ? *spec.cocycle : Cocycle2::zero(ValueGroup::trivial(), k);
    AfReport rep = af_stages(g, c, stages);
    out.af = af_limit_descriptor(rep);
    out.certificate.push_back({"AF-ROUTE", "the degree functor is a coboundary (b0 found), so the algebra is AF",
                               true, "b0 over " + std::to_string(rep.b0.size()) + " vertices"});
    out.certificate.push_back({"UNITALITY", "finite vertex set", true, std::to_string(g.num_vertices()) + " vertices"});
    return out;
  }

  Cocycle2 c0 = Cocycle2::zero(ValueGroup::rationals(), k);
  mpq_class t = 0;
  if (spec.kind == Kind::Exponential) {
    if (!spec.cocycle) throw Error(ErrorKind::InvalidArgument, "exponential twist needs a cocycle");
    const GroupKind gk = spec.cocycle->group().kind;
    if (gk != GroupKind::Rat && gk != GroupKind::Int && gk != GroupKind::Trivial)
      throw Error(ErrorKind::WrongValueGroup, "exponential twist needs a real-valued cocycle",
                  {{"group", spec.cocycle->group().name()}});
    c0 = *spec.cocycle;
    t = spec.t;
  } else if (spec.kind == Kind::Character) {
    if (!spec.cocycle || !spec.character) throw Error(ErrorKind::InvalidArgument, "character twist needs c and chi");
    const Character& chi = *spec.character;
    if (!chi.accepts(spec.cocycle->group()))
      throw Error(ErrorKind::GroupMismatch, "character does not accept the cocycle group");
    switch (chi.kind()) {
      case Character::Kind::TorusPoint: c0 = rational_functional(*spec.cocycle, chi.turns()); break;
      case Character::Kind::IntChar: c0 = rational_functional(*spec.cocycle, {chi.parameter()}); break;
      case Character::Kind::RealChar: c0 = rational_functional(*spec.cocycle, {chi.parameter()}); break;
      case Character::Kind::Evaluation:
        throw Error(ErrorKind::Unsupported, "circle-valued cocycle without a real lift");
    }
    t = 1;
  }

  const VerifyResult vr = verify_cocycle(c0, g, ones(k, 2));
  if (!vr.ok) throw Error(ErrorKind::InvalidArgument, "the real cocycle failed verification", {{"certificate", vr.certificate}});
  out.certificate = spec.kind == Kind::Untwisted
                        ? std::vector<CertificateStep>{{"GRAPH-KTHEORY-FORMULA",
                                                        "untwisted K-theory from the rank-k chain complex, k in {1, 2}",
                                                        k <= 2, "k = " + std::to_string(k)},
                                                       {"UNITALITY", "finite vertex set", true,
                                                        std::to_string(g.num_vertices()) + " vertices"}}
                        : exp_certificate(g, c0, t, vr);
  if (k > 2)
    throw Error(ErrorKind::UnsupportedRank, "reduction certified; untwisted K-theory not computed for k >= 3",
                {{"k", k}, {"certificate", certificate_to_json(out.certificate)}});
  out.groups = ktheory_untwisted(g);
  return out;
}

nlohmann::json certificate_to_json(const std::vector<CertificateStep>& steps) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : steps)
    out.push_back({{"step", s.name}, {"hypothesis", s.hypothesis}, {"checked", s.checked}, {"detail", s.detail}});
  return out;
}

nlohmann::json TwistedKTheory::to_json(const KGraph& g) const {
  nlohmann::json j;
  if (groups) {
    j["K0"] = groups->k0.to_json(&g);
    j["K1"] = groups->k1.to_json(&g);
  }
  if (af) {
    j["af"] = af->to_json();
    j["K0"] = af->text;
    j["K1"] = {{"rank", 0}, {"torsion", nlohmann::json::array()}, {"group", "0"}};
  }
  j["certificate"] = certificate_to_json(certificate);
  return j;
}

}  // namespace kgl
