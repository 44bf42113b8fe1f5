#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "kgl/catalog.hpp"
#include "kgl/error.hpp"
#include "kgl/groupoid.hpp"

using namespace kgl;

namespace {

/// Replace Z(mu, nu) by the disjoint pieces Z(mu e, nu e), e of a single color.
IndicatorCombination refine(const KGraph& g, const IndicatorCombination& f, int color) {
  IndicatorCombination out;
  for (const auto& [z, a] : f)
    for (const Path& e : g.paths(unit_degree(g.rank(), color), z.mu.source))
      add_term(out, BasicSet{g.compose(z.mu, e), g.compose(z.nu, e)}, a);
  return out;
}

Cocycle2 twisted(const KGraph& g) {
  const Cocycle2 c = fixture::nontrivial_cocycle(g.rank());
  return character_apply(c, fixture::twist_character(c, mpq_class(1, 8)));
}

IndicatorCombination random_combination(std::mt19937_64& rng, const KGraph& g, int terms, std::int64_t depth) {
  const std::vector<Path> ps = g.paths_below(ones(g.rank(), depth));
  std::uniform_int_distribution<std::size_t> pick(0, ps.size() - 1);
  std::uniform_int_distribution<int> q(-2, 2);
  IndicatorCombination f;
  while (static_cast<int>(f.size()) < terms) {
    const Path& a = ps[pick(rng)];
    const Path& b = ps[pick(rng)];
    if (a.source == b.source) add_term(f, {a, b}, Scalar::gaussian(q(rng), 1 + q(rng) * q(rng)));
  }
  return f;
}

}  // namespace

TEST(Groupoid, BasicSetMembership) {
  const KGraph g = example_graph("O_2");
  const Path a = g.edge(0), b = g.edge(1);
  const Path ab = g.compose(a, b), bb = g.compose(b, b);
  EXPECT_TRUE(contains(g, {a, b}, {g.compose(ab, b), {0}, g.compose(bb, b)}));
  EXPECT_FALSE(contains(g, {a, b}, {g.compose(bb, b), {0}, g.compose(ab, b)}));
}

TEST(Groupoid, RefinementIsTheSameFunction) {
  std::mt19937_64 rng(1);
  for (const std::string name : {"T_2", "O_2", "flip", "full2"}) {
    const KGraph g = example_graph(name);
    for (int i = 0; i < 10; ++i) {
      const IndicatorCombination f = random_combination(rng, g, 3, 1);
      for (int color = 0; color < g.rank(); ++color) EXPECT_TRUE(same_function(g, f, refine(g, f, color))) << name;
      IndicatorCombination h = f;
      add_term(h, f.begin()->first, Scalar(1));
      EXPECT_FALSE(same_function(g, f, h));
    }
  }
}

TEST(Groupoid, BisectionNormIsRefinementInvariant) {
  const KGraph g = example_graph("O_3");
  const Path a = g.edge(0), b = g.edge(1), c = g.edge(2);
  IndicatorCombination f;
  add_term(f, {a, g.compose(b, b)}, Scalar::gaussian(3, 4));
  add_term(f, {b, g.compose(b, c)}, Scalar::gaussian(1, -1));
  add_term(f, {g.compose(c, a), c}, Scalar(2));
  const BisectionNorm n = bisection_norm(g, f);
  EXPECT_TRUE(n.norm_squared.equals(Scalar(25)));
  EXPECT_DOUBLE_EQ(n.norm, 5.0);
  const BisectionNorm r = bisection_norm(g, refine(g, f, 0));
  EXPECT_TRUE(r.norm_squared.equals(n.norm_squared));
}

TEST(Groupoid, OverlappingSetsAreRejected) {
  const KGraph g = example_graph("O_2");
  IndicatorCombination f;
  add_term(f, {g.vertex(0), g.vertex(0)}, Scalar(1));
  add_term(f, {g.edge(0), g.edge(0)}, Scalar(1));
  try {
    bisection_norm(g, f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotDisjointBisection);
  }
}

TEST(Groupoid, ConvolutionIsAssociative) {
  std::mt19937_64 rng(2);
  for (const std::string name : {"T_2", "O_2", "full2"}) {
    const KGraph g = example_graph(name);
    const Cocycle2 c = twisted(g);
    for (int i = 0; i < 8; ++i) {
      const auto f = random_combination(rng, g, 2, 1), h = random_combination(rng, g, 2, 1),
                 k = random_combination(rng, g, 2, 1);
      EXPECT_TRUE(same_function(g, convolve(g, convolve(g, f, h, c), k, c), convolve(g, f, convolve(g, h, k, c), c)))
          << name;
    }
  }
}

TEST(Groupoid, TwistChangesConvolution) {
  const KGraph g = example_graph("T_2");
  const IndicatorCombination e1 = indicator({g.edge(0), g.vertex(0)});
  const IndicatorCombination e2 = indicator({g.edge(1), g.vertex(0)});
  const Cocycle2 c = twisted(g);
  const Cocycle2 triv = Cocycle2::zero(ValueGroup::circle_turns(), 2);
  EXPECT_TRUE(same_function(g, convolve(g, e1, e2, triv), convolve(g, e2, e1, triv)));
  EXPECT_FALSE(same_function(g, convolve(g, e1, e2, c), convolve(g, e2, e1, c)));
  IndicatorCombination rotated = convolve(g, e1, e2, c);
  for (auto& [z, a] : rotated) a *= Scalar::turn(mpq_class(1, 8));
  EXPECT_TRUE(same_function(g, convolve(g, e2, e1, c), rotated));
}

TEST(Groupoid, AdjointReversesUntwistedConvolution) {
  std::mt19937_64 rng(5);
  const KGraph g = example_graph("O_2");
  const Cocycle2 triv = Cocycle2::zero(ValueGroup::circle_turns(), 1);
  for (int i = 0; i < 10; ++i) {
    const auto f = random_combination(rng, g, 3, 2), h = random_combination(rng, g, 3, 2);
    EXPECT_TRUE(same_function(g, adjoint(adjoint(f)), f));
    EXPECT_TRUE(same_function(g, adjoint(convolve(g, f, h, triv)), convolve(g, adjoint(h), adjoint(f), triv)));
  }
}

TEST(Groupoid, IndicatorsOfOneSetHaveUnitModuleNorm) {
  for (const std::string name : {"T_2", "O_2", "flip"}) {
    const KGraph g = example_graph(name);
    for (const Path& p : g.paths_below(ones(g.rank(), 1)))
      EXPECT_NEAR(module_norm(g, indicator({p, g.vertex(p.source)}, Scalar(3))), 3.0, 1e-9) << name;
  }
}

TEST(Groupoid, InnerProductMatchesPlainSumForUntwisted) {
  const KGraph g = example_graph("full2");
  const Cocycle2 triv = Cocycle2::zero(ValueGroup::circle_turns(), 2);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    const auto f = random_combination(rng, g, 2, 1), h = random_combination(rng, g, 2, 1);
    const InnerProductReport rep = inner_product_s(g, f, h, triv, 3);
    EXPECT_TRUE(rep.identity_holds);
    const std::vector<Scalar> plain = l2_inner_product(g, f, h, 3);
    ASSERT_EQ(plain.size(), rep.values.size());
    for (std::size_t u = 0; u < plain.size(); ++u) EXPECT_TRUE(plain[u].equals(rep.values[u]));
  }
}

TEST(Groupoid, ContinuityParallelMatchesSerial) {
  const KGraph g = example_graph("T_2");
  std::vector<double> params;
  const auto seq = fixture::torus_sequence(2, 8, params);
  const Cocycle2 lim = Cocycle2::zero(ValueGroup::circle_turns(), 2);
  std::mt19937_64 rng(14);
  for (int i = 0; i < 3; ++i) {
    PairCoefficients a;
    IndicatorCombination x;
    fixture::random_probe_input(rng, g, 2, a, x);
    const ContinuityReport p = continuity_probe(g, a, seq, params, lim, x, 2);
    const ContinuityReport s = continuity_probe_serial(g, a, seq, params, lim, x, 2);
    ASSERT_EQ(p.rows.size(), s.rows.size());
    EXPECT_NEAR(p.limit_norm, s.limit_norm, 1e-12);
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
      EXPECT_NEAR(p.rows[r].diff_norm, s.rows[r].diff_norm, 1e-12);
      EXPECT_EQ(p.rows[r].lsc_ok, s.rows[r].lsc_ok);
    }
  }
}

TEST(Groupoid, ContinuityAtTheLimitIsZero) {
  const KGraph g = example_graph("T_2");
  const Cocycle2 lim = Cocycle2::zero(ValueGroup::circle_turns(), 2);
  std::mt19937_64 rng(15);
  PairCoefficients a;
  IndicatorCombination x;
  fixture::random_probe_input(rng, g, 2, a, x);
  const ContinuityReport r = continuity_probe(g, a, {lim, lim}, {0.0, 0.0}, lim, x, 2);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.diff_norm, 0.0);
    EXPECT_TRUE(row.lsc_ok);
  }
}

TEST(Groupoid, ContinuityDifferenceIsLinearInTheTwist) {
  // Halving theta halves the difference to first order.
  const KGraph g = example_graph("T_2");
  std::vector<double> params;
  const auto seq = fixture::torus_sequence(2, 16, params);
  const Cocycle2 lim = Cocycle2::zero(ValueGroup::circle_turns(), 2);
  std::mt19937_64 rng(16);
  PairCoefficients a;
  IndicatorCombination x;
  fixture::random_probe_input(rng, g, 2, a, x);
  const ContinuityReport r = continuity_probe(g, a, seq, params, lim, x, 2);
  const double ratio = r.rows[15].diff_norm / r.rows[14].diff_norm;
  EXPECT_NEAR(ratio, 0.5, 1e-3);
}

TEST(Groupoid, ProbeRejectsShallowDepth) {
  const KGraph g = example_graph("T_2");
  const Cocycle2 lim = Cocycle2::zero(ValueGroup::circle_turns(), 2);
  PairCoefficients a;
  a[{g.edge(0), g.vertex(0)}] = Scalar(1);
  const IndicatorCombination x = indicator({g.paths({2, 2})[0], g.vertex(0)});
  try {
    continuity_probe(g, a, {lim}, {0.0}, lim, x, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DepthTooShallow);
  }
}

TEST(Groupoid, GroupoidImageNeedsTrivialGroup) {
  const KGraph g = example_graph("T_2");
  const AlgebraElement x = AlgebraElement::s(g, g.edge(0), ValueGroup::free_abelian(1));
  EXPECT_THROW(to_groupoid(g, x, twisted(g)), Error);
}
