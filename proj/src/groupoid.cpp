#include "kgl/groupoid.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "kgl/error.hpp"

namespace kgl {

namespace {

std::int64_t max_component(const Degree& d) { return d.empty() ? 0 : *std::max_element(d.begin(), d.end()); }
std::int64_t min_component(const Degree& d) { return d.empty() ? 0 : *std::min_element(d.begin(), d.end()); }

// t = d(p) - m+ = d(q) - m-
Degree overlap(const Path& p, const Path& q) { return p.degree - positive_part(p.degree - q.degree); }

void check_circle(const Cocycle2& c) {
  if (!c.group().is_circle() && c.group().kind != GroupKind::Trivial)
    throw Error(ErrorKind::WrongValueGroup, "groupoid twists need a circle-valued cocycle",
                {{"group", c.group().name()}});
}

Scalar phase_of(const AbelianValue& v, bool numeric) {
  if (v.group().kind == GroupKind::Trivial) return Scalar(1);
  Scalar p = v.phase();
  return numeric ? Scalar::approx(p.to_complex()) : p;
}

AbelianValue cell_twist(const KGraph& g, const Cocycle2& c, const Cell& cell) {
  return c(g, cell.nu, cell.tail) - c(g, cell.mu, cell.tail);
}

Cell must_resolve(const KGraph& g, const Path& p, const Path& q) {
  auto cell = resolve_cell(g, p, q);
  if (!cell) throw Error(ErrorKind::DepthTooShallow, "pair did not resolve after refinement", {{"left", g.describe(p)}, {"right", g.describe(q)}});
  return *cell;
}

void check_depth(const KGraph& g, const BasicSet& z, std::optional<int> depth) {
  if (!depth) return;
  const Degree top = ones(g.rank(), *depth);
  if (!leq(z.mu.degree, top) || !leq(z.nu.degree, top))
    throw Error(ErrorKind::DepthTooShallow, "convolution needs paths deeper than the truncation",
                {{"depth", *depth}, {"mu", to_string(z.mu.degree)}, {"nu", to_string(z.nu.degree)}});
}

using Levels = std::map<Degree, std::int64_t>;

void collect_levels(const IndicatorCombination& f, Levels& lv) {
  for (const auto& [z, a] : f) {
    auto& slot = lv[z.lag()];
    slot = std::max(slot, max_component(overlap(z.mu, z.nu)));
  }
}

IndicatorCombination refine_to(const KGraph& g, const IndicatorCombination& f, const Levels& lv) {
  IndicatorCombination out;
  const int k = g.rank();
  for (const auto& [z, a] : f) {
    const Degree ext = ones(k, lv.at(z.lag())) - overlap(z.mu, z.nu);
    for (const Path& d : g.paths(ext, z.mu.source)) add_term(out, BasicSet{g.compose(z.mu, d), g.compose(z.nu, d)}, a);
  }
  return out;
}

std::vector<Path> units_at(const KGraph& g, int depth) { return g.paths(ones(g.rank(), depth)); }

// Sums weights over units extending each given path.
std::vector<Scalar> unit_values(const KGraph& g, const std::vector<std::pair<Path, Scalar>>& weights, int depth) {
  const Degree top = ones(g.rank(), depth);
  const std::vector<Path> units = units_at(g, depth);
  std::map<Path, std::size_t> index;
  for (std::size_t i = 0; i < units.size(); ++i) index.emplace(units[i], i);
  std::vector<Scalar> values(units.size());
  for (const auto& [p, w] : weights) {
    if (!leq(p.degree, top))
      throw Error(ErrorKind::DepthTooShallow, "evaluation depth is below a set in play",
                  {{"depth", depth}, {"degree", to_string(p.degree)}});
    for (const Path& u : g.extensions(p, top - p.degree)) values[index.at(u)] += w;
  }
  return values;
}

IndicatorCombination to_groupoid_impl(const KGraph& g, const AlgebraElement& x, const Cocycle2& c, bool numeric) {
  check_circle(c);
  if (x.group().kind != GroupKind::Trivial)
    throw Error(ErrorKind::GroupMismatch, "specialize the element to scalar coefficients first",
                {{"group", x.group().name()}});
  IndicatorCombination out;
  for (const auto& [key, q] : x.terms()) {
    const Path& p = key.left;
    const Path& r = key.right;
    for (const Path& d : g.paths(resolving_extension(g, p, r), p.source)) {
      const Path pd = g.compose(p, d);
      const Path rd = g.compose(r, d);
      AbelianValue tw = c(g, p, d) - c(g, r, d) + cell_twist(g, c, must_resolve(g, pd, rd));
      add_term(out, BasicSet{pd, rd}, q * phase_of(tw, numeric));
    }
  }
  return out;
}

void convolve_sets(const KGraph& g, const BasicSet& u, const Scalar& a, const BasicSet& v, const Scalar& b,
                   const Cocycle2& c, std::optional<int> depth, bool numeric, IndicatorCombination& out) {
  for (const Path& ext : g.mce(u.nu, v.mu)) {
    const Path alpha = g.factorize(ext, u.nu.degree).second;
    const Path beta = g.factorize(ext, v.mu.degree).second;
    const Path left = g.compose(u.mu, alpha);
    const Path right = g.compose(v.nu, beta);
    Degree e = join(resolving_extension(g, left, ext), resolving_extension(g, ext, right));
    e = join(e, resolving_extension(g, left, right));
    for (const Path& d : g.paths(e, ext.source)) {
      const Path ld = g.compose(left, d);
      const Path md = g.compose(ext, d);
      const Path rd = g.compose(right, d);
      AbelianValue sigma = cell_twist(g, c, must_resolve(g, ld, rd)) - cell_twist(g, c, must_resolve(g, ld, md)) -
                           cell_twist(g, c, must_resolve(g, md, rd));
      BasicSet z{ld, rd};
      check_depth(g, z, depth);
      add_term(out, z, a * b * phase_of(sigma, numeric));
    }
  }
}

IndicatorCombination convolve_impl(const KGraph& g, const IndicatorCombination& f, const IndicatorCombination& h,
                                   const Cocycle2& c, std::optional<int> depth, bool numeric) {
  check_circle(c);
  IndicatorCombination out;
  for (const auto& [u, a] : f)
    for (const auto& [v, b] : h) convolve_sets(g, u, a, v, b, c, depth, numeric, out);
  return out;
}

}  // namespace

bool contains(const KGraph& g, const BasicSet& z, const GroupoidWord& w) {
  if (w.m != z.lag()) return false;
  if (!g.is_prefix(z.mu, w.x) || !g.is_prefix(z.nu, w.y)) return false;
  const Degree room = meet(w.x.degree - z.mu.degree, w.y.degree - z.nu.degree);
  return g.segment(w.x, z.mu.degree, z.mu.degree + room) == g.segment(w.y, z.nu.degree, z.nu.degree + room);
}

void add_term(IndicatorCombination& f, const BasicSet& z, const Scalar& a) {
  if (z.mu.source != z.nu.source)
    throw Error(ErrorKind::NotComposable, "basic set needs s(mu) = s(nu)");
  auto it = f.find(z);
  if (it == f.end()) {
    if (!a.is_zero()) f.emplace(z, a);
    return;
  }
  it->second += a;
  if (it->second.is_zero()) f.erase(it);
}

IndicatorCombination indicator(const BasicSet& z, const Scalar& a) {
  IndicatorCombination f;
  add_term(f, z, a);
  return f;
}

std::optional<Cell> resolve_cell(const KGraph& g, const Path& p, const Path& q) {
  if (p.source != q.source) throw Error(ErrorKind::NotComposable, "pair needs a common source");
  const int k = g.rank();
  const Degree lag = p.degree - q.degree;
  const Degree mp = positive_part(lag);
  const Degree mn = negative_part(lag);
  const Degree t = p.degree - mp;
  for (std::int64_t j = 0; j <= min_component(t); ++j) {
    const Degree a = ones(k, j) + mp;
    const Degree b = ones(k, j) + mn;
    Path tail = g.segment(p, a, p.degree);
    if (tail == g.segment(q, b, q.degree))
      return Cell{g.factorize(p, a).first, g.factorize(q, b).first, std::move(tail)};
  }
  return std::nullopt;
}

Degree resolving_extension(const KGraph& g, const Path& p, const Path& q) {
  if (resolve_cell(g, p, q)) return zero_degree(g.rank());
  const Degree t = overlap(p, q);
  return ones(g.rank(), max_component(t)) - t;
}

IndicatorCombination canonical(const KGraph& g, const IndicatorCombination& f) {
  Levels lv;
  collect_levels(f, lv);
  return refine_to(g, f, lv);
}

bool same_function(const KGraph& g, const IndicatorCombination& f, const IndicatorCombination& h) {
  IndicatorCombination d = f;
  for (const auto& [z, a] : h) add_term(d, z, -a);
  return canonical(g, d).empty();
}

IndicatorCombination to_groupoid(const KGraph& g, const AlgebraElement& x, const Cocycle2& c) {
  return to_groupoid_impl(g, x, c, false);
}

IndicatorCombination convolve(const KGraph& g, const BasicSet& u, const BasicSet& v, const Cocycle2& c,
                              std::optional<int> depth) {
  return convolve_impl(g, indicator(u), indicator(v), c, depth, false);
}

IndicatorCombination convolve(const KGraph& g, const IndicatorCombination& f, const IndicatorCombination& h,
                              const Cocycle2& c, std::optional<int> depth) {
  return convolve_impl(g, f, h, c, depth, false);
}

IndicatorCombination adjoint(const IndicatorCombination& f) {
  // sigma(a, a^{-1}) = 1 on reduced cells, so the adjoint carries no twist.
  IndicatorCombination out;
  for (const auto& [z, a] : f) add_term(out, BasicSet{z.nu, z.mu}, a.conj());
  return out;
}

std::vector<Scalar> l2_inner_product(const KGraph& g, const IndicatorCombination& f, const IndicatorCombination& h,
                                     int depth) {
  Levels lv;
  collect_levels(f, lv);
  collect_levels(h, lv);
  const IndicatorCombination rf = refine_to(g, f, lv);
  const IndicatorCombination rh = refine_to(g, h, lv);
  std::vector<std::pair<Path, Scalar>> weights;
  for (const auto& [z, a] : rf) {
    auto it = rh.find(z);
    if (it != rh.end()) weights.emplace_back(z.nu, a.conj() * it->second);
  }
  return unit_values(g, weights, depth);
}

InnerProductReport inner_product_s(const KGraph& g, const IndicatorCombination& f, const IndicatorCombination& h,
                                   const Cocycle2& c, int depth) {
  InnerProductReport rep;
  rep.depth = depth;
  rep.units = units_at(g, depth);
  rep.values = l2_inner_product(g, f, h, depth);

  // Off-diagonal lag-zero sets meet no units; only Z(p, p) contributes.
  std::vector<std::pair<Path, Scalar>> diagonal;
  int eff = depth;
  for (const auto& [z, a] : convolve(g, adjoint(f), h, c)) {
    if (!(z.mu == z.nu)) continue;
    diagonal.emplace_back(z.mu, a);
    eff = std::max<int>(eff, static_cast<int>(max_component(z.mu.degree)));
  }
  rep.effective_depth = eff;
  const std::vector<Scalar> twisted = unit_values(g, diagonal, eff);
  const std::vector<Scalar> plain = eff == depth ? rep.values : l2_inner_product(g, f, h, eff);
  for (std::size_t i = 0; i < plain.size(); ++i)
    if (!plain[i].equals(twisted[i])) rep.identity_holds = false;
  return rep;
}

BisectionNorm bisection_norm(const KGraph& g, const IndicatorCombination& f) {
  std::vector<std::pair<BasicSet, Scalar>> sets(f.begin(), f.end());
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      const BasicSet& a = sets[i].first;
      const BasicSet& b = sets[j].first;
      if (!g.mce(a.mu, b.mu).empty() || !g.mce(a.nu, b.nu).empty())
        throw Error(ErrorKind::NotDisjointBisection, "sets overlap in range or source",
                    {{"first", {g.describe(a.mu), g.describe(a.nu)}}, {"second", {g.describe(b.mu), g.describe(b.nu)}}});
    }
  BisectionNorm out;
  out.norm_squared = Scalar(0);
  for (const auto& [z, a] : sets) {
    const double v = a.abs();
    if (v > out.norm) {
      out.norm = v;
      out.norm_squared = a * a.conj();
    }
  }
  return out;
}

double module_norm(const KGraph& g, const IndicatorCombination& h) {
  const IndicatorCombination ch = canonical(g, h);
  if (ch.empty()) return 0.0;
  std::int64_t depth = 0;
  for (const auto& [z, a] : ch) depth = std::max(depth, max_component(z.nu.degree));
  double best = 0.0;
  for (const Scalar& v : l2_inner_product(g, ch, ch, static_cast<int>(depth))) best = std::max(best, v.to_complex().real());
  return std::sqrt(best);
}

namespace {

ContinuityReport continuity_impl(const KGraph& g, const PairCoefficients& a, const std::vector<Cocycle2>& c_seq,
                                 const std::vector<double>& parameters, const Cocycle2& c_lim,
                                 const IndicatorCombination& x, int depth, double tol, bool parallel) {
  if (parameters.size() != c_seq.size())
    throw Error(ErrorKind::InvalidArgument, "one parameter per cocycle is required");
  std::vector<Cocycle2> all = c_seq;
  all.push_back(c_lim);
  for (const Cocycle2& c : all) check_circle(c);

  AlgebraElement op(ValueGroup::trivial());
  for (const auto& [pair, q] : a)
    op.add(TermKey{pair.first, AbelianValue::zero(ValueGroup::trivial()), pair.second}, q);

  const Degree top = ones(g.rank(), depth);
  for (const auto& [z, q] : x)
    if (!leq(z.mu.degree, top) || !leq(z.nu.degree, top))
      throw Error(ErrorKind::DepthTooShallow, "vector is not supported at this depth", {{"depth", depth}});
  const IndicatorCombination cx = canonical(g, x);
  std::vector<std::pair<BasicSet, Scalar>> columns(cx.begin(), cx.end());

  std::vector<IndicatorCombination> ops(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) ops[i] = to_groupoid_impl(g, op, all[i], true);

  // matrix[i][col] = S_a(c_i) applied to the column atom
  const long ncol = static_cast<long>(columns.size());
  std::vector<std::vector<IndicatorCombination>> matrix(all.size(), std::vector<IndicatorCombination>(columns.size()));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long col = 0; col < ncol; ++col) {
    try {
      const IndicatorCombination atom = indicator(columns[static_cast<std::size_t>(col)].first, Scalar(1));
      for (std::size_t i = 0; i < all.size(); ++i)
        matrix[i][static_cast<std::size_t>(col)] = convolve_impl(g, ops[i], atom, all[i], std::nullopt, true);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<IndicatorCombination> images(all.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t col = 0; col < columns.size(); ++col)
      for (const auto& [z, q] : matrix[i][col]) add_term(images[i], z, q * Scalar::approx(columns[col].second.to_complex()));

  ContinuityReport rep;
  const IndicatorCombination& lim = images.back();
  rep.limit_norm = module_norm(g, lim);
  for (std::size_t i = 0; i < c_seq.size(); ++i) {
    ContinuityRow row;
    row.n = static_cast<int>(i) + 1;
    row.parameter = parameters[i];
    IndicatorCombination diff = images[i];
    for (const auto& [z, q] : lim) add_term(diff, z, -q);
    row.diff_norm = module_norm(g, diff);
    row.norm = module_norm(g, images[i]);
    rep.rows.push_back(row);
  }
  // Tail infimum of the norms against the limit norm.
  double tail = INFINITY;
  for (std::size_t i = rep.rows.size(); i-- > 0;) {
    tail = std::min(tail, rep.rows[i].norm);
    rep.rows[i].lsc_ok = tail >= rep.limit_norm - tol;
  }
  return rep;
}

}  // namespace

ContinuityReport continuity_probe(const KGraph& g, const PairCoefficients& a, const std::vector<Cocycle2>& c_seq,
                                  const std::vector<double>& parameters, const Cocycle2& c_lim,
                                  const IndicatorCombination& x, int depth, double tol) {
  return continuity_impl(g, a, c_seq, parameters, c_lim, x, depth, tol, true);
}

ContinuityReport continuity_probe_serial(const KGraph& g, const PairCoefficients& a,
                                         const std::vector<Cocycle2>& c_seq, const std::vector<double>& parameters,
                                         const Cocycle2& c_lim, const IndicatorCombination& x, int depth,
                                         double tol) {
  return continuity_impl(g, a, c_seq, parameters, c_lim, x, depth, tol, false);
}

nlohmann::json combination_to_json(const KGraph& g, const IndicatorCombination& f) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [z, a] : f) {
    nlohmann::json t = a.to_json();
    t["mu"] = path_to_json(g, z.mu);
    t["nu"] = path_to_json(g, z.nu);
    out.push_back(t);
  }
  return out;
}

}  // namespace kgl
