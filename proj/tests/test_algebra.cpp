#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "kgl/algebra.hpp"
#include "kgl/catalog.hpp"
#include "kgl/error.hpp"

using namespace kgl;

namespace {

AlgebraElement product(const KGraph& g, const Cocycle2& c, std::initializer_list<AlgebraElement> xs) {
  auto it = xs.begin();
  AlgebraElement out = *it++;
  for (; it != xs.end(); ++it) out = star_product(g, out, *it, c);
  return out;
}

AlgebraElement unit(const KGraph& g, const ValueGroup& grp) {
  AlgebraElement one(grp);
  for (int v = 0; v < g.num_vertices(); ++v) one += AlgebraElement::vertex(g, v, grp);
  return one;
}

}  // namespace

TEST(Algebra, RotationRelationOnTorus) {
  const KGraph g = example_graph("T_2");
  const Cocycle2 c = torus_cocycle(2);
  const ValueGroup grp = algebra_group(c.group());
  const Path e1 = g.edge(0), e2 = g.edge(1);
  const Path both = g.compose(e1, e2);
  const AlgebraElement a = AlgebraElement::s(g, e1, grp), b = AlgebraElement::s(g, e2, grp);
  EXPECT_TRUE(equals(g, star_product(g, a, b, c), AlgebraElement::term(both, AbelianValue::zero(grp), g.vertex(0)), c));
  EXPECT_TRUE(equals(g, star_product(g, b, a, c), AlgebraElement::term(both, AbelianValue::free({1}), g.vertex(0)), c));

  // After specializing at theta the generators satisfy s2 s1 = e(theta) s1 s2.
  const Character chi = Character::torus({mpq_class(1, 5)});
  const Cocycle2 circ = character_apply(c, chi);
  const AlgebraElement u = specialize(a, chi), v = specialize(b, chi);
  EXPECT_TRUE(equals(g, star_product(g, v, u, circ),
                     star_product(g, u, v, circ).scaled(Scalar::turn(mpq_class(1, 5))), circ));
  EXPECT_FALSE(equals(g, star_product(g, v, u, circ), star_product(g, u, v, circ), circ));
}

TEST(Algebra, CuntzKriegerRelations) {
  for (const std::string name : {"O_2", "O_3", "flip", "full2", "C_3"}) {
    const KGraph g = example_graph(name);
    const Cocycle2 c = fixture::nontrivial_cocycle(g.rank());
    const ValueGroup grp = algebra_group(c.group());
    for (int v = 0; v < g.num_vertices(); ++v) {
      const AlgebraElement p = AlgebraElement::vertex(g, v, grp);
      EXPECT_TRUE(equals(g, star_product(g, p, p, c), p, c));
      for (int color = 0; color < g.rank(); ++color) {
        AlgebraElement sum(grp);
        for (const Path& e : g.paths(unit_degree(g.rank(), color), v)) {
          const AlgebraElement s = AlgebraElement::s(g, e, grp);
          sum += star_product(g, s, AlgebraElement::s_star(g, e, grp), c);
          EXPECT_TRUE(equals(g, star_product(g, AlgebraElement::s_star(g, e, grp), s, c),
                             AlgebraElement::vertex(g, e.source, grp), c));
        }
        EXPECT_TRUE(equals(g, sum, p, c)) << name << " vertex " << v << " color " << color;
      }
    }
    EXPECT_TRUE(equals(g, unit(g, grp), star_product(g, unit(g, grp), unit(g, grp), c), c));
  }
}

TEST(Algebra, DistinctEdgesAreOrthogonal) {
  const KGraph g = example_graph("O_3");
  const Cocycle2 c = Cocycle2::zero(ValueGroup::trivial(), 1);
  const ValueGroup grp = ValueGroup::trivial();
  const AlgebraElement x = star_product(g, AlgebraElement::s_star(g, g.edge(0), grp), AlgebraElement::s(g, g.edge(1), grp), c);
  EXPECT_TRUE(equals(g, x, AlgebraElement(grp), c));
}

TEST(Algebra, SerialAndParallelProductsAgree) {
  std::mt19937_64 rng(3);
  for (const auto& s : fixture::algebra_setups()) {
    const ValueGroup grp = algebra_group(s.c.group());
    for (int i = 0; i < 20; ++i) {
      const AlgebraElement x = fixture::random_element(rng, s.g, grp, ones(s.g.rank(), 2), 6);
      const AlgebraElement y = fixture::random_element(rng, s.g, grp, ones(s.g.rank(), 2), 6);
      const AlgebraElement p = star_product(s.g, x, y, s.c);
      const AlgebraElement q = star_product_serial(s.g, x, y, s.c);
      ASSERT_EQ(p.size(), q.size()) << s.name;
      auto it = q.terms().begin();
      for (const auto& [k, v] : p.terms()) {
        EXPECT_TRUE(k == it->first);
        EXPECT_TRUE(v.equals(it->second));
        ++it;
      }
    }
  }
}

TEST(Algebra, LinearityAndInvolution) {
  std::mt19937_64 rng(4);
  for (const auto& s : fixture::algebra_setups()) {
    const ValueGroup grp = algebra_group(s.c.group());
    for (int i = 0; i < 15; ++i) {
      const AlgebraElement x = fixture::random_element(rng, s.g, grp, ones(s.g.rank(), 1), 3);
      const AlgebraElement y = fixture::random_element(rng, s.g, grp, ones(s.g.rank(), 1), 3);
      const AlgebraElement z = fixture::random_element(rng, s.g, grp, ones(s.g.rank(), 1), 3);
      EXPECT_TRUE(equals(s.g, star_product(s.g, x, y + z, s.c),
                         star_product(s.g, x, y, s.c) + star_product(s.g, x, z, s.c), s.c));
      EXPECT_TRUE(equals(s.g, involution(involution(x)), x, s.c));
      EXPECT_TRUE(equals(s.g, involution(x.scaled(Scalar::gaussian(0, 1))),
                         involution(x).scaled(Scalar::gaussian(0, -1)), s.c));
    }
  }
}

TEST(Algebra, ExpansionPreservesTheElement) {
  const KGraph g = example_graph("full2");
  const Cocycle2 c = torus_cocycle(2);
  const ValueGroup grp = algebra_group(c.group());
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const AlgebraElement x = fixture::random_element(rng, g, grp, {1, 1}, 4);
    const AlgebraElement e = expand_to_level(g, x, c, {2, 2});
    EXPECT_TRUE(equals(g, x, e, c));
    for (const auto& [k, q] : e.terms()) {
      (void)q;
      EXPECT_EQ(k.left.degree, (Degree{2, 2}));
    }
  }
  try {
    expand_to_level(g, AlgebraElement::s(g, g.paths({2, 2})[0], grp), c, {1, 1});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::LevelTooLow);
  }
}

TEST(Algebra, CohomologousMapIsMultiplicative) {
  const KGraph g = example_graph("flip");
  const Cocycle2 c2 = torus_cocycle(2);
  const OneCochain b = OneCochain::rule(ValueGroup::free_abelian(1), [](const KGraph&, const Path& p) {
    long s = 0;
    for (std::size_t i = 0; i < p.edges.size(); ++i) s += static_cast<long>((i + 1) * (p.edges[i] + 1));
    return AbelianValue::free({s});
  });
  const Cocycle2 c = c2 + coboundary1(b);
  const ValueGroup grp = algebra_group(c.group());
  std::mt19937_64 rng(12);
  for (int i = 0; i < 40; ++i) {
    const AlgebraElement x = fixture::random_term(rng, g, grp, {1, 1});
    const AlgebraElement y = fixture::random_term(rng, g, grp, {1, 1});
    EXPECT_TRUE(equals(g, cohomologous_map(g, star_product(g, x, y, c), b),
                       star_product(g, cohomologous_map(g, x, b), cohomologous_map(g, y, b), c2), c2));
  }
}

TEST(Algebra, JsonRoundTrip) {
  const KGraph g = example_graph("O_2xC_2");
  const Cocycle2 c = torus_cocycle(2);
  const ValueGroup grp = algebra_group(c.group());
  std::mt19937_64 rng(21);
  const AlgebraElement x = fixture::random_element(rng, g, grp, {1, 1}, 5);
  const AlgebraElement y = AlgebraElement::from_json(x.to_json(g), g, grp);
  EXPECT_TRUE(equals(g, x, y, c));
  EXPECT_EQ(x.size(), y.size());
}
