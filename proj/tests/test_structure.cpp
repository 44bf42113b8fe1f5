#include <gtest/gtest.h>

#include "kgl/catalog.hpp"
#include "kgl/structure.hpp"
#include "oracles.hpp"

using namespace kgl;

namespace {

/// reach[v][y]: some path of any degree runs from y to v (v Lambda y nonempty).
std::vector<std::vector<bool>> reachability(const KGraph& g) {
  const int nv = g.num_vertices();
  std::vector<std::vector<bool>> out(nv, std::vector<bool>(nv, false));
  for (const Degree& n : degrees_below(ones(g.rank(), nv))) {
    const oracle::Mat counts = oracle::path_counts(g, n);
    for (int v = 0; v < nv; ++v)
      for (int y = 0; y < nv; ++y)
        if (counts[v][y] > 0) out[v][y] = true;
  }
  return out;
}

KirchbergReport report(const std::string& name, std::int64_t bound = 2) {
  const KGraph g = example_graph(name);
  KirchbergBounds b;
  b.pair_bound = ones(g.rank(), bound);
  return kirchberg_report(g, b);
}

}  // namespace

TEST(Structure, CuntzAlgebrasAreEligible) {
  for (const std::string name : {"O_2", "O_3"}) {
    const KirchbergReport r = report(name);
    EXPECT_TRUE(r.eligible) << name;
    EXPECT_EQ(r.aperiodic.status, VerdictStatus::Verified);
    EXPECT_EQ(r.cofinal.status, VerdictStatus::Verified);
    EXPECT_FALSE(r.cycles.cycles.empty());
    EXPECT_TRUE(r.failing.empty());
  }
  EXPECT_TRUE(report("full2", 1).eligible);
}

TEST(Structure, PeriodicGraphsAreNotEligible) {
  for (const std::string name : {"T_2", "C_2", "flip", "O_2xC_2"}) {
    const KirchbergReport r = report(name);
    EXPECT_FALSE(r.eligible) << name;
    EXPECT_EQ(r.aperiodic.status, VerdictStatus::Counterexample) << name;
    EXPECT_FALSE(r.failing.empty());
  }
}

TEST(Structure, PeriodicWitnessesNeverSeparate) {
  for (const std::string name : {"T_2", "C_3", "flip", "O_2xC_2"}) {
    const KGraph g = example_graph(name);
    // bound 3 so the length-3 period of C_3 is inside the search
    const StructureVerdict v = aperiodicity_probe(g, ones(g.rank(), 3));
    ASSERT_EQ(v.status, VerdictStatus::Counterexample) << name;
    const Path mu = path_from_json(g, v.witness["mu"]);
    const Path nu = path_from_json(g, v.witness["nu"]);
    ASSERT_NE(mu, nu);
    for (const Path& tau : g.paths_below(ones(g.rank(), 2))) {
      if (tau.range != mu.source) continue;
      EXPECT_FALSE(oracle::mce_brute(g, g.compose(mu, tau), g.compose(nu, tau)).empty()) << name;
    }
  }
}

TEST(Structure, SeparatorsSeparate) {
  for (const std::string name : {"O_2", "full2", "O_3"}) {
    const KGraph g = example_graph(name);
    const std::vector<Path> ps = g.paths_below(ones(g.rank(), 1));
    std::size_t verified = 0;
    for (const Path& mu : ps)
      for (const Path& nu : ps) {
        if (mu == nu || mu.source != nu.source) continue;
        const SeparationResult r = separate_pair(g, mu, nu);
        ASSERT_EQ(r.status, VerdictStatus::Verified) << name;
        ASSERT_TRUE(r.tau.has_value());
        EXPECT_TRUE(oracle::mce_brute(g, g.compose(mu, *r.tau), g.compose(nu, *r.tau)).empty());
        ++verified;
      }
    EXPECT_GT(verified, 0u);
  }
}

TEST(Structure, DisjointUnionIsNotCofinal) {
  const KGraph g = example_graph("T_2+T_2");
  const StructureVerdict v = cofinality_check(g, 16);
  ASSERT_EQ(v.status, VerdictStatus::Counterexample);
  const int x = g.vertex_index(v.witness["v"].get<std::string>());
  const int w = g.vertex_index(v.witness["w"].get<std::string>());
  const auto reach = reachability(g);
  // At every level j the sources of w Lambda^{j*1} include a vertex unreachable from x.
  for (std::int64_t j = 0; j < 6; ++j) {
    bool escapes = false;
    for (const Path& mu : g.paths(ones(2, j), w))
      if (!reach[x][mu.source]) escapes = true;
    EXPECT_TRUE(escapes) << j;
  }
  EXPECT_FALSE(report("T_2+T_2").eligible);
}

TEST(Structure, BoundedVerdictUpgradesWithTheBound) {
  // C_3 has no periodic pair within degree 2; its period shows up at degree 3.
  const KGraph g = example_graph("C_3");
  EXPECT_EQ(aperiodicity_probe(g, {2}).status, VerdictStatus::Verified);
  EXPECT_EQ(aperiodicity_probe(g, {3}).status, VerdictStatus::Counterexample);
}

TEST(Structure, CofinalGraphsVerified) {
  for (const std::string name : {"O_2", "T_2", "C_3", "flip", "full2", "line", "O_2@0:4"}) {
    const KGraph g = example_graph(name);
    const StructureVerdict v = cofinality_check(g, 16);
    EXPECT_EQ(v.status, VerdictStatus::Verified) << name;
  }
}

TEST(Structure, CycleConditionOnCuntz) {
  const KGraph g = example_graph("O_2");
  const Path a = g.edge(0), b = g.edge(1);
  EXPECT_TRUE(cycle_condition_holds(g, g.compose(a, a), a));
  EXPECT_FALSE(cycle_condition_holds(g, a, g.compose(a, a)));
  const GeneralizedCycleReport rep = generalized_cycle_search(g, {2});
  bool found = false;
  for (const auto& c : rep.cycles) {
    EXPECT_TRUE(oracle::mce_brute(g, c.mu, g.compose(c.nu, c.entrance)).empty());
    if (c.mu == g.compose(a, a) && c.nu == a && c.entrance == b) found = true;
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(rep.reached, std::vector<int>{0});
}

TEST(Structure, VerdictJson) {
  const KGraph g = example_graph("O_2");
  const KirchbergReport r = report("O_2");
  const nlohmann::json j = r.to_json(g);
  EXPECT_EQ(j["aperiodicity"]["status"], "Verified");
  EXPECT_EQ(j["cofinality"]["status"], "Verified");
  EXPECT_TRUE(j["eligible"].get<bool>());
}
