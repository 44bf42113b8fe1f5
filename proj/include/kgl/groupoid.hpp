#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kgl/algebra.hpp"
#include "kgl/cocycle.hpp"
#include "kgl/graph.hpp"
#include "kgl/scalar.hpp"

namespace kgl {

/// Z(mu, nu) = {(mu z, d(mu) - d(nu), nu z)} for s(mu) = s(nu).
struct BasicSet {
  Path mu;
  Path nu;

  Degree lag() const { return mu.degree - nu.degree; }
  auto operator<=>(const BasicSet&) const = default;
  bool operator==(const BasicSet&) const = default;
};

/// Truncated groupoid element (x, m, y); x and y have degree N * 1.
struct GroupoidWord {
  Path x;
  Degree m;
  Path y;
};

bool contains(const KGraph& g, const BasicSet& z, const GroupoidWord& w);

/// Finite sum of coefficients times indicator functions of basic sets.
using IndicatorCombination = std::map<BasicSet, Scalar>;

void add_term(IndicatorCombination& f, const BasicSet& z, const Scalar& a);
IndicatorCombination indicator(const BasicSet& z, const Scalar& a = Scalar(1));

/// The unique reduced cell containing every (P z, ., Q z), if it does not depend on z.
/// A reduced cell is a pair (mu, nu) with d(mu) = j*1 + m+, d(nu) = j*1 + m- where j = 0
/// or the final 1-blocks of mu and nu differ. `tail` satisfies P = mu tail, Q = nu tail.
struct Cell {
  Path mu;
  Path nu;
  Path tail;
};
std::optional<Cell> resolve_cell(const KGraph& g, const Path& p, const Path& q);
/// Smallest extension degree after which (p, q) resolves.
Degree resolving_extension(const KGraph& g, const Path& p, const Path& q);

/// Expresses f with one refinement level per lag: every term of lag m has degrees
/// (D*1 + m+, D*1 + m-), D the smallest level that covers all terms of that lag.
IndicatorCombination canonical(const KGraph& g, const IndicatorCombination& f);
bool same_function(const KGraph& g, const IndicatorCombination& f, const IndicatorCombination& h);

/// Image of an algebra element (trivial group part) under s_lambda s_mu^* -> twisted
/// indicator functions, relative to the circle cocycle c.
IndicatorCombination to_groupoid(const KGraph& g, const AlgebraElement& x, const Cocycle2& c);

/// Twisted convolution; `depth` (if given) bounds every produced path degree by depth * 1.
IndicatorCombination convolve(const KGraph& g, const BasicSet& u, const BasicSet& v, const Cocycle2& c,
                              std::optional<int> depth = std::nullopt);
IndicatorCombination convolve(const KGraph& g, const IndicatorCombination& f, const IndicatorCombination& h,
                              const Cocycle2& c, std::optional<int> depth = std::nullopt);
IndicatorCombination adjoint(const IndicatorCombination& f);

struct InnerProductReport {
  int depth = 0;
  int effective_depth = 0;  // depth at which the twisted side was compared
  std::vector<Path> units;  // all paths of degree depth * 1
  std::vector<Scalar> values;
  bool identity_holds = true;
};

/// <f, h>(x) = sum over s(a) = x of conj(f(a)) h(a), compared against R(f^* * h).
InnerProductReport inner_product_s(const KGraph& g, const IndicatorCombination& f, const IndicatorCombination& h,
                                   const Cocycle2& c, int depth);
/// The plain l2(s) side only, evaluated on units of degree depth * 1.
std::vector<Scalar> l2_inner_product(const KGraph& g, const IndicatorCombination& f, const IndicatorCombination& h,
                                     int depth);

struct BisectionNorm {
  double norm = 0.0;
  Scalar norm_squared;  // exact max |a|^2
};
BisectionNorm bisection_norm(const KGraph& g, const IndicatorCombination& f);

struct ContinuityRow {
  int n = 0;
  double parameter = 0.0;
  double diff_norm = 0.0;
  double norm = 0.0;
  bool lsc_ok = true;
};

struct ContinuityReport {
  std::vector<ContinuityRow> rows;
  double limit_norm = 0.0;
};

/// Pair-coefficient map a(lambda, mu) defining S_a(c) = sum a(lambda, mu) s_lambda s_mu^*.
using PairCoefficients = std::map<std::pair<Path, Path>, Scalar>;

/// ||h||^2 = max over units of <h, h>.
double module_norm(const KGraph& g, const IndicatorCombination& h);

/// Applies S_a(c_n) and S_a(c_lim) to x as sparse matrices on the atoms of x.
ContinuityReport continuity_probe(const KGraph& g, const PairCoefficients& a, const std::vector<Cocycle2>& c_seq,
                                  const std::vector<double>& parameters, const Cocycle2& c_lim,
                                  const IndicatorCombination& x, int depth, double tol = 1e-12);
ContinuityReport continuity_probe_serial(const KGraph& g, const PairCoefficients& a,
                                         const std::vector<Cocycle2>& c_seq, const std::vector<double>& parameters,
                                         const Cocycle2& c_lim, const IndicatorCombination& x, int depth,
                                         double tol = 1e-12);

nlohmann::json combination_to_json(const KGraph& g, const IndicatorCombination& f);

}  // namespace kgl
