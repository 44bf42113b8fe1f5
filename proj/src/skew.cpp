#include "kgl/skew.hpp"

#include <algorithm>
#include <sstream>

#include "kgl/error.hpp"

namespace kgl {

namespace {

std::vector<Degree> box_points(const Box& box) {
  Degree lo, span;
  for (const auto& [a, b] : box) {
    lo.push_back(a);
    span.push_back(b - a);
  }
  std::vector<Degree> out;
  for (const Degree& d : degrees_below(span)) out.push_back(lo + d);
  return out;
}

bool in_box(const Box& box, const Degree& n) {
  for (std::size_t i = 0; i < box.size(); ++i)
    if (n[i] < box[i].first || n[i] > box[i].second) return false;
  return true;
}

}  // namespace

Box parse_box(const std::string& text) {
  Box box;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    auto colon = part.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::ParseError, "window interval must be a:b", {{"text", part}});
    try {
      std::int64_t a = std::stoll(part.substr(0, colon));
      std::int64_t b = std::stoll(part.substr(colon + 1));
      box.emplace_back(a, b);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::ParseError, "bad window interval", {{"text", part}});
    }
  }
  return box;
}

std::string box_to_string(const Box& box) {
  std::string s;
  for (std::size_t i = 0; i < box.size(); ++i)
    s += (i ? "," : "") + std::to_string(box[i].first) + ":" + std::to_string(box[i].second);
  return s;
}

std::optional<int> SkewWindow::vertex_at(int base_v, const Degree& n) const {
  auto it = lookup.find({base_v, n});
  if (it == lookup.end()) return std::nullopt;
  return it->second;
}

std::optional<Path> SkewWindow::lift(const Path& p, const Degree& n) const {
  auto r = vertex_at(p.range, n);
  if (!r) return std::nullopt;
  Path out{*r, *r, p.degree, {}};
  Degree m = n;
  const int k = base.rank();
  for (int e : p.edges) {
    auto it = edge_lookup.find({e, m});
    if (it == edge_lookup.end()) return std::nullopt;
    out.edges.push_back(it->second);
    m = m + unit_degree(k, base.color(e));
  }
  auto s = vertex_at(p.source, m);
  if (!s) return std::nullopt;
  out.source = *s;
  return out;
}

Path SkewWindow::project(const Path& p) const {
  Path out{base_vertex.at(p.range), base_vertex.at(p.source), p.degree, {}};
  for (int e : p.edges) out.edges.push_back(base_edge.at(e));
  return out;
}

SkewWindow build_window(const KGraph& g, const Box& box) {
  const int k = g.rank();
  if (static_cast<int>(box.size()) != k)
    throw Error(ErrorKind::InvalidArgument, "window needs one interval per color", {{"k", k}});
  for (const auto& [a, b] : box)
    if (a > b) throw Error(ErrorKind::EmptyWindow, "window interval is empty", {{"window", box_to_string(box)}});

  SkewWindow w;
  w.base = g;
  w.box = box;
  const Skeleton& bs = g.skeleton();
  Skeleton s;
  s.k = k;
  Degree upper;
  for (const auto& iv : box) upper.push_back(iv.second);

  const auto points = box_points(box);
  for (int v = 0; v < g.num_vertices(); ++v) {
    for (const Degree& n : points) {
      w.lookup.emplace(std::make_pair(v, n), static_cast<int>(s.vertices.size()));
      s.vertices.push_back(bs.vertices[v] + "@" + to_string(n));
      w.base_vertex.push_back(v);
      w.offset.push_back(n);
      w.interior.push_back(leq(n + ones(k), upper));
    }
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& be = bs.edges[e];
    const Degree d = unit_degree(k, be.color);
    for (const Degree& n : points) {
      if (!in_box(box, n + d)) continue;
      Edge ed;
      ed.id = be.id + "@" + to_string(n);
      ed.color = be.color;
      ed.range = w.lookup.at({be.range, n});
      ed.source = w.lookup.at({be.source, n + d});
      w.edge_lookup.emplace(std::make_pair(e, n), static_cast<int>(s.edges.size()));
      s.edges.push_back(ed);
      w.base_edge.push_back(e);
    }
  }
  for (const Square& q : bs.squares) {
    const Degree df = unit_degree(k, bs.edges[q.f].color);
    const Degree dg = unit_degree(k, bs.edges[q.g].color);
    for (const Degree& n : points) {
      if (!in_box(box, n + df + dg)) continue;
      s.squares.push_back(Square{w.edge_lookup.at({q.f, n}), w.edge_lookup.at({q.g, n + df}),
                                 w.edge_lookup.at({q.g2, n}), w.edge_lookup.at({q.f2, n + dg})});
    }
  }
  ValidateOptions opts;
  opts.source_exempt.resize(w.interior.size());
  for (std::size_t i = 0; i < w.interior.size(); ++i) opts.source_exempt[i] = !w.interior[i];
  w.graph = KGraph::validate(std::move(s), opts);
  return w;
}

Cocycle2 pullback_cocycle(const SkewWindow& w, const Cocycle2& c) {
  return Cocycle2::pullback(c, w.base, w.base_vertex, w.base_edge);
}

std::optional<Path> Translation::apply(const KGraph& g, const Path& p) const {
  auto r = vertex_map.at(p.range);
  auto s = vertex_map.at(p.source);
  if (!r || !s) return std::nullopt;
  Path out{*r, *s, p.degree, {}};
  for (int e : p.edges) {
    auto m = edge_map.at(e);
    if (!m) return std::nullopt;
    out.edges.push_back(*m);
  }
  (void)g;
  return out;
}

Translation translation_action(const SkewWindow& w, const Degree& n) {
  Translation t;
  t.shift = n;
  const int nv = w.graph.num_vertices();
  for (int v = 0; v < nv; ++v) t.vertex_map.push_back(w.vertex_at(w.base_vertex[v], w.offset[v] + n));
  const auto& edges = w.graph.skeleton().edges;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto it = w.edge_lookup.find({w.base_edge[e], w.offset[edges[e].range] + n});
    t.edge_map.push_back(it == w.edge_lookup.end() ? std::nullopt : std::optional<int>(it->second));
  }
  return t;
}

IntMatrix stage_matrix(const KGraph& g, const std::vector<int>& from, const std::vector<int>& to, const Degree& step) {
  IntMatrix m(from.size(), std::vector<std::int64_t>(to.size(), 0));
  for (std::size_t a = 0; a < from.size(); ++a)
    for (std::size_t b = 0; b < to.size(); ++b) m[a][b] = g.count(from[a], step, to[b]);
  return m;
}

AfReport af_stages(const KGraph& g, const Cocycle2& c, const std::vector<Degree>& stages) {
  auto solved = degree_coboundary_solve(g);
  if (!solved) throw Error(ErrorKind::NotDegreeCoboundary, "the degree map is not a coboundary on this graph");
  const int k = g.rank();
  const int nv = g.num_vertices();
  AfReport rep;
  rep.b0 = *solved;
  for (int i = 0; i < k; ++i) {
    std::int64_t lo = 0;
    for (int v = 0; v < nv; ++v) lo = v == 0 ? rep.b0[v][i] : std::min(lo, rep.b0[v][i]);
    for (int v = 0; v < nv; ++v) rep.b0[v][i] -= lo;
  }
  for (std::size_t i = 0; i + 1 < stages.size(); ++i)
    if (!leq(stages[i], stages[i + 1]))
      throw Error(ErrorKind::InvalidArgument, "stages must be increasing",
                  {{"stage", to_string(stages[i])}, {"next", to_string(stages[i + 1])}});

  for (const Degree& n : stages) {
    if (static_cast<int>(n.size()) != k || !is_nonnegative(n))
      throw Error(ErrorKind::InvalidArgument, "stage must lie in N^k", {{"stage", to_string(n)}});
    AfStage st;
    st.n = n;
    for (int v = 0; v < nv; ++v) {
      if (rep.b0[v] != n) continue;
      st.blocks.push_back(v);
      std::int64_t dim = 0;
      for (const Degree& d : degrees_below(rep.b0[v])) dim += static_cast<std::int64_t>(g.path_table(d).by_source[v].size());
      st.dims.push_back(dim);
    }
    rep.stages.push_back(std::move(st));
  }
  for (std::size_t i = 0; i + 1 < rep.stages.size(); ++i)
    rep.connecting.push_back(
        stage_matrix(g, rep.stages[i].blocks, rep.stages[i + 1].blocks, rep.stages[i + 1].n - rep.stages[i].n));

  // kappa(v) = 0 and kappa(lambda alpha) = kappa(lambda) + c(lambda, alpha) for d(alpha) = 1.
  std::int64_t top = 0;
  for (const Degree& n : stages) top = std::max(top, *std::min_element(n.begin(), n.end()));
  std::map<Path, AbelianValue> kappa;
  for (int v = 0; v < nv; ++v) kappa.emplace(g.vertex(v), AbelianValue::zero(c.group()));
  for (std::int64_t j = 1; j <= top; ++j) {
    for (const Path& mu : g.paths(ones(k, j))) {
      auto [lambda, alpha] = g.factorize(mu, ones(k, j - 1));
      kappa.emplace(mu, kappa.at(lambda) + c(g, lambda, alpha));
    }
  }
  for (std::int64_t j = 1; j <= top; ++j) {
    const PathTable& prev = g.path_table(ones(k, j - 1));
    const PathTable& step = g.path_table(ones(k));
    for (const Path& mu : g.paths(ones(k, j))) {
      int decompositions = 0;
      for (int li : prev.by_range[mu.range]) {
        const Path& lambda = prev.all[li];
        for (int ai : step.by_range[lambda.source]) {
          const Path& alpha = step.all[ai];
          if (g.compose(lambda, alpha) != mu) continue;
          ++decompositions;
          ++rep.kappa_checked;
          AbelianValue via = kappa.at(lambda) + c(g, lambda, alpha);
          if (!(via == kappa.at(mu))) {
            rep.kappa_well_defined = false;
            rep.kappa_counterexamples.push_back({{"path", g.describe(mu)},
                                                 {"prefix", g.describe(lambda)},
                                                 {"recursive", kappa.at(mu).to_json()},
                                                 {"via_prefix", via.to_json()}});
          }
        }
      }
      if (decompositions != 1) {
        rep.kappa_well_defined = false;
        rep.kappa_counterexamples.push_back({{"path", g.describe(mu)}, {"decompositions", decompositions}});
      }
    }
  }
  for (auto& [p, v] : kappa) rep.kappa.push_back({p, v});
  return rep;
}

nlohmann::json AfReport::to_json(const KGraph& g) const {
  const auto& ids = g.skeleton().vertices;
  nlohmann::json j;
  j["b0"] = nlohmann::json::object();
  for (std::size_t v = 0; v < b0.size(); ++v) j["b0"][ids[v]] = b0[v];
  j["stages"] = nlohmann::json::array();
  for (const AfStage& st : stages) {
    nlohmann::json blocks = nlohmann::json::array();
    for (int v : st.blocks) blocks.push_back(ids[v]);
    j["stages"].push_back({{"n", st.n}, {"blocks", blocks}, {"dims", st.dims}});
  }
  j["connecting"] = connecting;
  j["kappa"] = nlohmann::json::array();
  for (const KappaEntry& e : kappa)
    j["kappa"].push_back({{"path", path_to_json(g, e.path)}, {"value", e.value.to_json()}});
  j["kappa_well_defined"] = kappa_well_defined;
  j["kappa_checked"] = kappa_checked;
  j["kappa_counterexamples"] = kappa_counterexamples;
  return j;
}

}  // namespace kgl
