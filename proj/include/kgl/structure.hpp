#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgl/graph.hpp"

namespace kgl {

enum class VerdictStatus { Verified, Counterexample, Inconclusive };
const char* to_string(VerdictStatus s);

struct StructureVerdict {
  VerdictStatus status = VerdictStatus::Inconclusive;
  nlohmann::json bound;
  nlohmann::json witness;  // null unless Counterexample
  nlohmann::json detail;

  nlohmann::json to_json() const;
};

/// Outcome of the separation search for one pair (mu, nu) with s(mu) = s(nu).
struct SeparationResult {
  VerdictStatus status = VerdictStatus::Inconclusive;
  std::optional<Path> tau;  // separating path when Verified
  std::size_t states = 0;
};

/// Decides whether some tau in s(mu)Lambda has MCE(mu tau, nu tau) empty. Runs a
/// finite automaton over (s(tau), {(g, g') : mu tau g = nu tau g'}); exhausting it
/// without an empty state certifies that no tau exists.
SeparationResult separate_pair(const KGraph& g, const Path& mu, const Path& nu, std::size_t state_cap = 200000);

StructureVerdict aperiodicity_probe(const KGraph& g, const Degree& bound, std::size_t state_cap = 200000);

/// For each pair (v, w), the smallest j with every mu in w Lambda^{j*1} having v Lambda s(mu)
/// nonempty. The source sets along j are eventually periodic, so a repeat certifies failure.
StructureVerdict cofinality_check(const KGraph& g, int bound);

struct GeneralizedCycle {
  Path mu;
  Path nu;
  Path entrance;  // sigma with MCE(mu, nu sigma) empty
};

struct GeneralizedCycleReport {
  std::vector<GeneralizedCycle> cycles;
  std::size_t without_entrance = 0;  // condition (1) holds but no sigma within the bound
  std::vector<int> reached;          // vertices v with v Lambda r(mu) nonempty for some listed cycle
  Degree bound;

  nlohmann::json to_json(const KGraph& g) const;
};

/// Condition (1) is checked exactly; the entrance is searched with d(sigma) <= bound.
GeneralizedCycleReport generalized_cycle_search(const KGraph& g, const Degree& bound);
bool cycle_condition_holds(const KGraph& g, const Path& mu, const Path& nu);

struct KirchbergBounds {
  Degree pair_bound;
  int cofinality_bound = 16;
  std::size_t state_cap = 200000;
};

struct KirchbergReport {
  StructureVerdict aperiodic;
  StructureVerdict cofinal;
  GeneralizedCycleReport cycles;
  bool all_reached = false;
  bool eligible = false;
  std::vector<std::string> certificate;
  std::vector<std::string> failing;

  nlohmann::json to_json(const KGraph& g) const;
};

KirchbergReport kirchberg_report(const KGraph& g, const KirchbergBounds& bounds, bool real_cocycle = false);

}  // namespace kgl
