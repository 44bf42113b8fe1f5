#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "kgl/cocycle.hpp"
#include "kgl/graph.hpp"
#include "kgl/skew.hpp"
#include "kgl/snf.hpp"

namespace kgl {

/// Z^rank + sum Z/torsion_i with classes written in (torsion..., free...) coordinates.
struct FgAbelianGroup {
  std::size_t rank = 0;
  std::vector<mpz_class> torsion;  // each >= 2, d_1 | d_2 | ...
  std::vector<std::vector<mpz_class>> vertex_classes;
  std::optional<std::vector<mpz_class>> unit_class;

  bool same_group(const FgAbelianGroup& o) const { return rank == o.rank && torsion == o.torsion; }
  bool operator==(const FgAbelianGroup& o) const = default;
  std::string describe() const;  // e.g. "Z^2 + Z/2"
  nlohmann::json to_json(const KGraph* g = nullptr) const;
};

/// coker(M) for M : Z^c -> Z^n together with the coordinate map on Z^n.
struct Cokernel {
  SmithForm snf;
  FgAbelianGroup group;
  /// Class of x in Z^n, in group coordinates.
  std::vector<mpz_class> coordinates(const std::vector<mpz_class>& x) const;
};

Cokernel cokernel(const BigMatrix& m, std::size_t n);
/// Basis of ker(M) as columns (returned as a list of vectors).
std::vector<std::vector<mpz_class>> kernel_basis(const BigMatrix& m, std::size_t c);

struct KGroups {
  FgAbelianGroup k0;
  FgAbelianGroup k1;
};

/// K0 = coker(1 - A^t), K1 = ker(1 - A^t) with A(v, w) = |v Lambda^1 w|.
KGroups ktheory_rank1(const KGraph& g);
/// K0 = coker d1 + ker d2, K1 = ker d1 / im d2 for the two-color complex.
KGroups ktheory_rank2(const KGraph& g);
KGroups ktheory_untwisted(const KGraph& g);

struct AfDescriptor {
  std::vector<std::size_t> block_counts;
  std::vector<IntMatrix> connecting;
  bool stationary = false;
  std::string text;
  nlohmann::json to_json() const;
};

AfDescriptor af_limit_descriptor(const AfReport& report);

struct CertificateStep {
  std::string name;
  std::string hypothesis;
  bool checked = false;
  std::string detail;
};

struct TwistSpec {
  enum class Kind { Untwisted, Exponential, Character, DegreeCoboundary, CircleNoLift };
  Kind kind = Kind::Untwisted;
  std::optional<Cocycle2> cocycle;    // c0 (real) or the cocycle fed to a character
  mpq_class t = 1;
  std::optional<Character> character;

  static TwistSpec untwisted();
  static TwistSpec exponential(Cocycle2 c0, mpq_class t);
  static TwistSpec via_character(Cocycle2 c, Character chi);
  static TwistSpec degree_coboundary(Cocycle2 c);
  static TwistSpec circle(Cocycle2 c);
};

struct TwistedKTheory {
  std::optional<KGroups> groups;
  std::optional<AfDescriptor> af;
  std::vector<CertificateStep> certificate;
  nlohmann::json to_json(const KGraph& g) const;
};

/// The real-valued cocycle sum_j w_j c_j for a DegreeBilinear free-abelian cocycle.
Cocycle2 rational_functional(const Cocycle2& c, const std::vector<mpq_class>& weights);

TwistedKTheory twisted_ktheory_reduce(const KGraph& g, const TwistSpec& spec);

nlohmann::json certificate_to_json(const std::vector<CertificateStep>& steps);

}  // namespace kgl
