#pragma once
// Random inputs shared by the property tests and the acceptance runner.

#include <random>
#include <string>
#include <vector>

#include "kgl/algebra.hpp"
#include "kgl/catalog.hpp"
#include "kgl/cocycle.hpp"
#include "kgl/groupoid.hpp"

namespace fixture {

struct Setup {
  std::string name;
  kgl::KGraph g;
  kgl::Cocycle2 c;
  kgl::Character chi;  // lands the cocycle group in the circle
};

/// Bilinear twist for rank 1 graphs, c(m, n) = m n in Z.
inline kgl::Cocycle2 rank1_bilinear() {
  return kgl::Cocycle2::degree_bilinear(kgl::ValueGroup::integers(), {{kgl::AbelianValue::integer(1)}});
}

/// The torus cocycle in rank >= 2, the product form in rank 1.
inline kgl::Cocycle2 nontrivial_cocycle(int k) { return k >= 2 ? kgl::torus_cocycle(k) : rank1_bilinear(); }

inline kgl::Character twist_character(const kgl::Cocycle2& c, const mpq_class& theta) {
  if (c.group().kind == kgl::GroupKind::Int) return kgl::Character::integer(theta);
  return kgl::Character::torus(std::vector<mpq_class>(static_cast<std::size_t>(c.group().rank), theta));
}

/// T_2, O_2 and flip, each with the trivial and the bilinear twist.
inline std::vector<Setup> algebra_setups() {
  std::vector<Setup> out;
  for (const std::string name : {"T_2", "O_2", "flip"}) {
    const kgl::KGraph g = kgl::example_graph(name);
    const kgl::Cocycle2 triv = kgl::Cocycle2::zero(kgl::ValueGroup::free_abelian(1), g.rank());
    out.push_back({name + "/trivial", g, triv, kgl::Character::torus({mpq_class(1, 5)})});
    const kgl::Cocycle2 c = nontrivial_cocycle(g.rank());
    out.push_back({name + "/bilinear", g, c, twist_character(c, mpq_class(1, 8))});
  }
  return out;
}

inline kgl::AbelianValue random_value(std::mt19937_64& rng, const kgl::ValueGroup& grp) {
  std::uniform_int_distribution<int> d(-2, 2);
  switch (grp.kind) {
    case kgl::GroupKind::FreeAbelian: {
      std::vector<mpz_class> v(static_cast<std::size_t>(grp.rank));
      for (auto& x : v) x = d(rng);
      return kgl::AbelianValue::free(v);
    }
    case kgl::GroupKind::Int: return kgl::AbelianValue::integer(d(rng));
    default: return kgl::AbelianValue::zero(grp);
  }
}

/// A single random spanning term q s_lambda u_a s_mu^* with degrees <= bound.
inline kgl::AlgebraElement random_term(std::mt19937_64& rng, const kgl::KGraph& g, const kgl::ValueGroup& grp,
                                       const kgl::Degree& bound) {
  const std::vector<kgl::Path> ps = g.paths_below(bound);
  std::uniform_int_distribution<std::size_t> pick(0, ps.size() - 1);
  std::uniform_int_distribution<int> q(-3, 3);
  while (true) {
    const kgl::Path& l = ps[pick(rng)];
    const kgl::Path& r = ps[pick(rng)];
    if (l.source != r.source) continue;
    int re = q(rng), im = q(rng);
    if (re == 0 && im == 0) re = 1;
    return kgl::AlgebraElement::term(l, random_value(rng, grp), r, kgl::Scalar::gaussian(re, im));
  }
}

/// Sum of up to `terms` random spanning terms.
inline kgl::AlgebraElement random_element(std::mt19937_64& rng, const kgl::KGraph& g, const kgl::ValueGroup& grp,
                                          const kgl::Degree& bound, int terms) {
  kgl::AlgebraElement x(grp);
  std::uniform_int_distribution<int> n(1, terms);
  for (int i = n(rng); i > 0; --i) x += random_term(rng, g, grp, bound);
  return x;
}

/// Random a(lambda, mu) and x for the continuity probe on a rank >= 2 graph.
inline void random_probe_input(std::mt19937_64& rng, const kgl::KGraph& g, int depth, kgl::PairCoefficients& a,
                               kgl::IndicatorCombination& x) {
  std::uniform_int_distribution<int> coef(-3, 3);
  const std::vector<kgl::Path> small = g.paths_below(kgl::ones(g.rank(), 1));
  while (a.empty())
    for (const kgl::Path& l : small)
      for (const kgl::Path& r : small)
        if (l.source == r.source && coef(rng) > 1) a[{l, r}] = kgl::Scalar::gaussian(coef(rng), coef(rng));
  const std::vector<kgl::Path> deep = g.paths_below(kgl::ones(g.rank(), depth));
  while (x.empty())
    for (const kgl::Path& p : deep)
      for (const kgl::Path& q : deep)
        if (p.source == q.source && coef(rng) > 1)
          kgl::add_term(x, kgl::BasicSet{p, q}, kgl::Scalar::gaussian(coef(rng), coef(rng)));
}

/// Circle cocycles theta_n = 2^-n times the torus cocycle, n = 1..steps.
inline std::vector<kgl::Cocycle2> torus_sequence(int k, int steps, std::vector<double>& params) {
  const kgl::Cocycle2 base = kgl::torus_cocycle(k);
  std::vector<kgl::Cocycle2> seq;
  params.clear();
  for (int n = 1; n <= steps; ++n) {
    std::vector<mpq_class> turns(static_cast<std::size_t>(base.group().rank), mpq_class(mpz_class(1), mpz_class(1) << n));
    seq.push_back(kgl::character_apply(base, kgl::Character::torus(turns)));
    params.push_back(std::ldexp(1.0, -n));
  }
  return seq;
}

}  // namespace fixture
