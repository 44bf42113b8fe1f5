#include "kgl/structure.hpp"

#include <algorithm>
#include <deque>
#include <exception>
#include <map>
#include <set>

#include "kgl/error.hpp"

namespace kgl {

namespace {

using Relation = std::vector<std::pair<Path, Path>>;
using State = std::pair<int, Relation>;

nlohmann::json path_json(const KGraph& g, const Path& p) { return path_to_json(g, p); }

// Vertices u with v Lambda u nonempty, for each v.
std::vector<std::set<int>> backward_reach(const KGraph& g) {
  const int nv = g.num_vertices();
  std::vector<std::vector<int>> into(nv);  // into[r] = sources of edges with range r
  for (const Edge& e : g.skeleton().edges) into[e.range].push_back(e.source);
  std::vector<std::set<int>> out(nv);
  for (int v = 0; v < nv; ++v) {
    std::deque<int> queue{v};
    out[v].insert(v);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int w : into[u])
        if (out[v].insert(w).second) queue.push_back(w);
    }
  }
  return out;
}

// Vertices v with v Lambda u nonempty.
std::set<int> forward_reach(const KGraph& g, int u) {
  std::set<int> seen{u};
  std::deque<int> queue{u};
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (const Edge& e : g.skeleton().edges)
      if (e.source == x && seen.insert(e.range).second) queue.push_back(e.range);
  }
  return seen;
}

std::vector<std::pair<Path, Path>> candidate_pairs(const KGraph& g, const Degree& bound, bool same_range) {
  std::vector<Path> ps = g.paths_below(bound);
  std::vector<std::pair<Path, Path>> out;
  for (const Path& a : ps)
    for (const Path& b : ps) {
      if (a == b || a.source != b.source) continue;
      if (same_range && a.range != b.range) continue;
      out.emplace_back(a, b);
    }
  return out;
}

}  // namespace

const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Verified: return "Verified";
    case VerdictStatus::Counterexample: return "Counterexample";
    case VerdictStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

nlohmann::json StructureVerdict::to_json() const {
  return {{"status", to_string(status)}, {"bound", bound}, {"witness", witness}, {"detail", detail}};
}

SeparationResult separate_pair(const KGraph& g, const Path& mu, const Path& nu, std::size_t state_cap) {
  if (mu.source != nu.source) throw Error(ErrorKind::NotComposable, "pair needs a common source");
  const Degree top = join(mu.degree, nu.degree);
  const Degree a = top - mu.degree;
  const Degree b = top - nu.degree;

  Relation start;
  for (const Path& x : g.paths(a, mu.source))
    for (const Path& y : g.paths(b, mu.source))
      if (g.compose(mu, x) == g.compose(nu, y)) start.emplace_back(x, y);
  std::sort(start.begin(), start.end());

  SeparationResult res;
  std::vector<State> states{{mu.source, start}};
  std::vector<std::pair<int, int>> parent{{-1, -1}};  // (state, edge)
  std::map<State, int> index{{states[0], 0}};
  auto finish = [&](int id) {
    std::vector<int> edges;
    for (int s = id; parent[s].first >= 0; s = parent[s].first) edges.push_back(parent[s].second);
    std::reverse(edges.begin(), edges.end());
    res.status = VerdictStatus::Verified;
    res.tau = edges.empty() ? g.vertex(mu.source) : g.from_edges(edges);
    res.states = states.size();
    return res;
  };
  if (start.empty()) return finish(0);

  const auto& edges = g.skeleton().edges;
  for (std::size_t cur = 0; cur < states.size(); ++cur) {
    const int u = states[cur].first;
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      if (edges[e].range != u) continue;
      const Path rho = g.edge(e);
      const int w = edges[e].source;
      std::vector<std::pair<Path, Path>> left, right;  // (gamma, delta) splits of rho x
      std::vector<Path> xs = g.paths(a, w), ys = g.paths(b, w);
      for (const Path& x : xs) left.push_back(g.factorize(g.compose(rho, x), a));
      for (const Path& y : ys) right.push_back(g.factorize(g.compose(rho, y), b));
      const Relation& rel = states[cur].second;
      Relation next;
      for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ys.size(); ++j) {
          if (!(left[i].second == right[j].second)) continue;
          if (std::binary_search(rel.begin(), rel.end(), std::make_pair(left[i].first, right[j].first)))
            next.emplace_back(xs[i], ys[j]);
        }
      std::sort(next.begin(), next.end());
      State st{w, std::move(next)};
      if (index.count(st)) continue;
      const bool empty = st.second.empty();
      index.emplace(st, static_cast<int>(states.size()));
      states.push_back(std::move(st));
      parent.emplace_back(static_cast<int>(cur), e);
      if (empty) return finish(static_cast<int>(states.size()) - 1);
      if (states.size() > state_cap) {
        res.states = states.size();
        return res;
      }
    }
  }
  res.status = VerdictStatus::Counterexample;
  res.states = states.size();
  return res;
}

StructureVerdict aperiodicity_probe(const KGraph& g, const Degree& bound, std::size_t state_cap) {
  const auto pairs = candidate_pairs(g, bound, false);
  std::vector<SeparationResult> results(pairs.size());
  std::exception_ptr failure;
  const long n = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      results[i] = separate_pair(g, pairs[i].first, pairs[i].second, state_cap);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  StructureVerdict v;
  v.bound = bound;
  std::size_t separated = 0, open = 0;
  Degree deepest = zero_degree(g.rank());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [mu, nu] = pairs[i];
    const SeparationResult& r = results[i];
    if (r.status == VerdictStatus::Verified) {
      if (!g.mce(g.compose(mu, *r.tau), g.compose(nu, *r.tau)).empty())
        throw Error(ErrorKind::InvalidArgument, "internal: separating path failed re-validation");
      ++separated;
      deepest = join(deepest, r.tau->degree);
    } else if (r.status == VerdictStatus::Counterexample) {
      if (v.witness.is_null())
        v.witness = {{"mu", path_json(g, mu)}, {"nu", path_json(g, nu)}, {"states_exhausted", r.states}};
    } else {
      ++open;
    }
  }
  v.status = !v.witness.is_null() ? VerdictStatus::Counterexample
             : open ? VerdictStatus::Inconclusive
                    : VerdictStatus::Verified;
  v.detail = {{"pairs", pairs.size()}, {"separated", separated}, {"inconclusive", open},
              {"max_separator_degree", deepest}};
  return v;
}

StructureVerdict cofinality_check(const KGraph& g, int bound) {
  const int nv = g.num_vertices();
  const auto reach = backward_reach(g);
  StructureVerdict v;
  v.bound = bound;
  bool full = true;
  for (int x = 0; x < nv; ++x) full = full && static_cast<int>(reach[x].size()) == nv;
  if (full) {
    v.status = VerdictStatus::Verified;
    v.detail = {{"m", 0}, {"reason", "every vertex reaches every vertex"}};
    return v;
  }
  const Degree step = ones(g.rank());
  std::vector<std::set<int>> next(nv);
  for (int u = 0; u < nv; ++u)
    for (const Path& p : g.paths(step, u)) next[u].insert(p.source);

  const int limit = std::max(bound, 10000);
  std::int64_t worst = 0;
  bool open = false;
  for (int x = 0; x < nv && v.witness.is_null(); ++x)
    for (int w = 0; w < nv; ++w) {
      std::set<int> cur{w};
      std::map<std::set<int>, int> seen;
      int j = 0;
      for (;; ++j) {
        if (std::includes(reach[x].begin(), reach[x].end(), cur.begin(), cur.end())) {
          worst = std::max<std::int64_t>(worst, j);
          break;
        }
        auto [it, fresh] = seen.emplace(cur, j);
        if (!fresh) {
          v.witness = {{"v", g.skeleton().vertices[x]},
                       {"w", g.skeleton().vertices[w]},
                       {"cycle_start", it->second},
                       {"cycle_length", j - it->second}};
          break;
        }
        if (j >= limit) {
          open = true;
          break;
        }
        std::set<int> nxt;
        for (int u : cur) nxt.insert(next[u].begin(), next[u].end());
        cur = std::move(nxt);
      }
      if (!v.witness.is_null()) break;
    }
  v.status = !v.witness.is_null() ? VerdictStatus::Counterexample
             : open ? VerdictStatus::Inconclusive
                    : VerdictStatus::Verified;
  v.detail = {{"m", worst}};
  return v;
}

bool cycle_condition_holds(const KGraph& g, const Path& mu, const Path& nu) {
  // Every extension of mu to degree >= d(nu) must pass through nu.
  const Degree e = positive_part(nu.degree - mu.degree);
  for (const Path& t : g.paths(e, mu.source))
    if (!g.is_prefix(nu, g.compose(mu, t))) return false;
  return true;
}

GeneralizedCycleReport generalized_cycle_search(const KGraph& g, const Degree& bound) {
  GeneralizedCycleReport rep;
  rep.bound = bound;
  const auto pairs = candidate_pairs(g, bound, true);

  std::vector<Path> sigmas = g.paths_below(bound);
  std::stable_sort(sigmas.begin(), sigmas.end(), [](const Path& a, const Path& b) {
    if (total(a.degree) != total(b.degree)) return total(a.degree) < total(b.degree);
    return a < b;
  });

  std::vector<int> verdict(pairs.size(), 0);  // 0 fails (1), 1 no entrance, 2 certified
  std::vector<Path> entrance(pairs.size());
  std::exception_ptr failure;
  const long n = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      const auto& [mu, nu] = pairs[i];
      if (!cycle_condition_holds(g, mu, nu)) continue;
      verdict[i] = 1;
      for (const Path& s : sigmas) {
        if (s.range != nu.source) continue;
        if (g.mce(mu, g.compose(nu, s)).empty()) {
          verdict[i] = 2;
          entrance[i] = s;
          break;
        }
      }
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::set<int> reached;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (verdict[i] == 1) ++rep.without_entrance;
    if (verdict[i] != 2) continue;
    rep.cycles.push_back({pairs[i].first, pairs[i].second, entrance[i]});
    auto r = forward_reach(g, pairs[i].first.range);
    reached.insert(r.begin(), r.end());
  }
  rep.reached.assign(reached.begin(), reached.end());
  return rep;
}

nlohmann::json GeneralizedCycleReport::to_json(const KGraph& g) const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : cycles)
    cs.push_back({{"mu", path_json(g, c.mu)}, {"nu", path_json(g, c.nu)}, {"entrance", path_json(g, c.entrance)}});
  nlohmann::json r = nlohmann::json::array();
  for (int v : reached) r.push_back(g.skeleton().vertices[v]);
  return {{"bound", bound}, {"cycles", cs}, {"without_entrance", without_entrance}, {"reached", r}};
}

KirchbergReport kirchberg_report(const KGraph& g, const KirchbergBounds& bounds, bool real_cocycle) {
  KirchbergReport rep;
  const Degree pb = bounds.pair_bound.empty() ? ones(g.rank(), 2) : bounds.pair_bound;
  rep.aperiodic = aperiodicity_probe(g, pb, bounds.state_cap);
  rep.cofinal = cofinality_check(g, bounds.cofinality_bound);
  rep.cycles = generalized_cycle_search(g, pb);
  rep.all_reached = static_cast<int>(rep.cycles.reached.size()) == g.num_vertices();

  if (rep.aperiodic.status != VerdictStatus::Verified)
    rep.failing.push_back(std::string("aperiodicity: ") + to_string(rep.aperiodic.status));
  if (rep.cofinal.status != VerdictStatus::Verified)
    rep.failing.push_back(std::string("cofinality: ") + to_string(rep.cofinal.status));
  if (rep.cycles.cycles.empty()) rep.failing.push_back("generalised cycle with entrance: none within bound");
  else if (!rep.all_reached) rep.failing.push_back("generalised cycle with entrance: some vertices not reached");
  rep.eligible = rep.failing.empty();
  if (!rep.eligible) return rep;

  const GeneralizedCycle& c = rep.cycles.cycles.front();
  rep.certificate = {
      "APERIODIC: every pair mu != nu with degrees <= " + to_string(pb) + " admits a separating path",
      "COFINAL: source sets of w Lambda^{j*1} enter v Lambda for every v, w (m = " +
          rep.cofinal.detail.at("m").dump() + ")",
      "GENERALISED-CYCLE: (" + g.describe(c.mu) + ", " + g.describe(c.nu) + ") with entrance " +
          g.describe(c.entrance) + ", reaching every vertex",
      "INFINITE-PROJECTION: s_r(nu) >= s_nu s_nu^* > s_mu s_mu^* in every twisted algebra",
      "SIMPLE-PURELY-INFINITE: C*(Lambda, c) is simple and purely infinite for every circle-valued 2-cocycle c",
      "KIRCHBERG: each C*(Lambda, c) is a unital UCT Kirchberg algebra, classified by K-theory and unit class",
  };
  if (real_cocycle)
    rep.certificate.push_back(
        "REAL-FAMILY: for a real-valued 2-cocycle c the algebras C*(Lambda, exp(2 pi i t c)), t real, share "
        "K-theory with unit class and are therefore isomorphic");
  return rep;
}

nlohmann::json KirchbergReport::to_json(const KGraph& g) const {
  return {{"aperiodicity", aperiodic.to_json()},
          {"cofinality", cofinal.to_json()},
          {"generalized_cycles", cycles.to_json(g)},
          {"all_vertices_reached", all_reached},
          {"eligible", eligible},
          {"certificate", certificate},
          {"failing", failing}};
}

}  // namespace kgl
