#include <gtest/gtest.h>

#include "kgl/catalog.hpp"
#include "kgl/cocycle.hpp"
#include "kgl/error.hpp"
#include "kgl/skew.hpp"

using namespace kgl;

namespace {

/// Direct check of c(mu,nu) + c(lambda,mu nu) = c(lambda,mu) + c(lambda mu,nu) on all triples.
std::size_t cocycle_violations(const Cocycle2& c, const KGraph& g, const Degree& bound) {
  std::size_t bad = 0;
  const std::vector<Path> ps = g.paths_below(bound);
  for (const Path& l : ps)
    for (const Path& m : ps) {
      if (l.source != m.range) continue;
      for (const Path& n : ps) {
        if (m.source != n.range) continue;
        const AbelianValue lhs = c(g, m, n) + c(g, l, g.compose(m, n));
        const AbelianValue rhs = c(g, l, m) + c(g, g.compose(l, m), n);
        if (!(lhs == rhs)) ++bad;
      }
    }
  for (const Path& p : ps) {
    if (!c(g, g.vertex(p.range), p).is_zero() || !c(g, p, g.vertex(p.source)).is_zero()) ++bad;
  }
  return bad;
}

}  // namespace

TEST(Cocycle, TorusCocycleValues) {
  const KGraph g = example_graph("T_3");
  const Cocycle2 c = torus_cocycle(3);
  EXPECT_EQ(c.group(), ValueGroup::free_abelian(3));
  // c(m, n) = sum_{j < i} m_i n_j (i, j)
  const Path p = g.paths({1, 2, 0})[0];
  const Path q = g.paths({3, 1, 2})[0];
  std::vector<mpz_class> want(3, 0);
  want[torus_generator_index(3, 2, 1)] = 2 * 3;  // m_2 n_1; m_3 = 0 kills the other two
  EXPECT_EQ(c(g, p, q), AbelianValue::free(want));
  EXPECT_EQ(cocycle_violations(c, g, {1, 1, 1}), 0u);
}

TEST(Cocycle, VerifyAgreesWithBruteForce) {
  for (const std::string name : {"T_2", "flip", "full2", "O_2xC_2"}) {
    const KGraph g = example_graph(name);
    const Cocycle2 c = torus_cocycle(2);
    EXPECT_TRUE(verify_cocycle(c, g, {2, 2}, false).ok) << name;
    EXPECT_EQ(cocycle_violations(c, g, {1, 1}), 0u) << name;
  }
}

TEST(Cocycle, DetectsNonCocycleTable) {
  const KGraph g = example_graph("O_2");
  const Path a = g.edge(0), b = g.edge(1);
  Cocycle2::PairTable t;
  t[{a, b}] = AbelianValue::integer(1);
  const Cocycle2 c = Cocycle2::table(ValueGroup::integers(), t, {3});
  const VerifyResult r = verify_cocycle(c, g, {3}, false);
  EXPECT_FALSE(r.ok);
  ASSERT_TRUE(r.counterexample.has_value());
  const auto& [l, m, n] = *r.counterexample;
  EXPECT_FALSE(c(g, m, n) + c(g, l, g.compose(m, n)) == c(g, l, m) + c(g, g.compose(l, m), n));
}

TEST(Cocycle, CoboundariesAreCocycles) {
  const KGraph g = example_graph("full2");
  const OneCochain b = OneCochain::rule(ValueGroup::integers(), [](const KGraph& gr, const Path& p) {
    mpz_class s = 0;
    for (std::size_t i = 0; i < p.edges.size(); ++i) s += (i + 1) * (p.edges[i] + 2) * (p.edges[i] + 2);
    (void)gr;
    return AbelianValue::integer(s);
  });
  const Cocycle2 c = coboundary1(b);
  EXPECT_EQ(cocycle_violations(c, g, {1, 1}), 0u);
  for (const Path& x : g.paths_below({1, 1}))
    for (const Path& y : g.paths_below({1, 1})) {
      if (x.source != y.range) continue;
      EXPECT_EQ(c(g, x, y), b(g, x) - b(g, g.compose(x, y)) + b(g, y));
    }
}

TEST(Cocycle, VertexCoboundary) {
  const KGraph g = example_graph("C_3");
  const OneCochain b = coboundary0(ValueGroup::integers(),
                                   {AbelianValue::integer(0), AbelianValue::integer(5), AbelianValue::integer(-2)});
  for (const Path& p : g.paths({2})) {
    const AbelianValue want = AbelianValue::integer(std::vector<long>{0, 5, -2}[p.source] -
                                                    std::vector<long>{0, 5, -2}[p.range]);
    EXPECT_EQ(b(g, p), want);
  }
}

TEST(Cocycle, CohomologousSolveFollowsDifferenceConvention) {
  const KGraph g = example_graph("flip");
  const Cocycle2 c2 = torus_cocycle(2);
  const OneCochain b = OneCochain::degree_additive(
      ValueGroup::free_abelian(1), {AbelianValue::free({3}), AbelianValue::free({-1})});
  const OneCochain b2 = coboundary0(ValueGroup::free_abelian(1), {AbelianValue::free({0}), AbelianValue::free({4})});
  const OneCochain rule = OneCochain::rule(ValueGroup::free_abelian(1), [b, b2](const KGraph& gr, const Path& p) {
    return b(gr, p) + b2(gr, p) + AbelianValue::free({p.edges.empty() ? 0 : p.edges.front()});
  });
  const Cocycle2 c = c2 + coboundary1(rule);
  const CohomologousSolution sol = cohomologous_solve(c, c2, g, {2, 2});
  ASSERT_TRUE(sol.found);
  // The solution must satisfy delta^1 b = c - c2 on every pair in range.
  for (const Path& x : g.paths_below({1, 1}))
    for (const Path& y : g.paths_below({1, 1})) {
      if (x.source != y.range) continue;
      const AbelianValue lhs = (*sol.b)(g, x) - (*sol.b)(g, g.compose(x, y)) + (*sol.b)(g, y);
      EXPECT_EQ(lhs, c(g, x, y) - c2(g, x, y));
    }
}

TEST(Cocycle, NoSolutionForNontrivialClass) {
  // Not a coboundary: c(e2, e1) - c(e1, e2) is nonzero while delta^1 b is symmetric on commuting edges.
  const KGraph g = example_graph("T_2");
  const Cocycle2 c = torus_cocycle(2);
  const Cocycle2 z = Cocycle2::zero(ValueGroup::free_abelian(1), 2);
  EXPECT_FALSE(cohomologous_solve(c, z, g, {2, 2}).found);
}

TEST(Cocycle, CharacterApplication) {
  const KGraph g = example_graph("T_2");
  const Cocycle2 c = character_apply(torus_cocycle(2), Character::torus({mpq_class(1, 8)}));
  EXPECT_TRUE(c.group().is_circle());
  const Path e1 = g.edge(0), e2 = g.edge(1);
  EXPECT_TRUE(c(g, e1, e2).is_zero());
  EXPECT_EQ(c(g, e2, e1), AbelianValue::turns(mpq_class(1, 8)));
  EXPECT_TRUE(c(g, e2, e1).phase().equals(Scalar::turn(mpq_class(1, 8))));
  EXPECT_TRUE(verify_cocycle(c, g, {2, 2}, false).ok);
}

TEST(Cocycle, ExponentiateScales) {
  const KGraph g = example_graph("T_2");
  const Cocycle2 real = Cocycle2::degree_bilinear(ValueGroup::rationals(),
                                                  {{AbelianValue::rat(0), AbelianValue::rat(0)},
                                                   {AbelianValue::rat(mpq_class(1, 3)), AbelianValue::rat(0)}});
  const Cocycle2 e = exponentiate(real, mpq_class(3, 2));
  EXPECT_EQ(e(g, g.edge(1), g.edge(0)), AbelianValue::radians(mpq_class(1, 2)));  // exp(i t c)
}

TEST(Cocycle, WrongGroupCharacterRejected) {
  const KGraph g = example_graph("T_2");
  try {
    character_apply(torus_cocycle(2), Character::torus({mpq_class(1), mpq_class(2)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::GroupMismatch || e.kind() == ErrorKind::WrongValueGroup);
  }
}

TEST(Cocycle, JsonRoundTrip) {
  const KGraph g = example_graph("flip");
  const Cocycle2 c = torus_cocycle(2) + coboundary1(OneCochain::degree_additive(
                                            ValueGroup::free_abelian(1), {AbelianValue::free({1}), AbelianValue::free({2})}));
  const Cocycle2 d = Cocycle2::from_json(c.to_json(g), g);
  for (const Path& x : g.paths_below({1, 1}))
    for (const Path& y : g.paths_below({1, 1}))
      if (x.source == y.range) EXPECT_EQ(c(g, x, y), d(g, x, y));
}

TEST(Cocycle, DegreeCoboundaryOnWindowsAndLoops) {
  EXPECT_FALSE(degree_coboundary_solve(example_graph("O_2")).has_value());
  EXPECT_FALSE(degree_coboundary_solve(example_graph("T_2")).has_value());
  // C_2 has no loop but a cycle of length 2 whose degree is nonzero.
  EXPECT_FALSE(degree_coboundary_solve(example_graph("C_2")).has_value());
  const SkewWindow w = build_window(example_graph("full2"), {{0, 2}, {0, 1}});
  const auto b0 = degree_coboundary_solve(w.graph);
  ASSERT_TRUE(b0.has_value());
  for (const Edge& e : w.graph.skeleton().edges)
    EXPECT_EQ((*b0)[e.source] - (*b0)[e.range], unit_degree(2, e.color));
}
