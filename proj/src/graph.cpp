#include "kgl/graph.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "kgl/error.hpp"

namespace kgl {

namespace {

std::uint64_t pair_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

std::string id_from_json(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw Error(ErrorKind::ParseError, "identifier must be a string or integer", {{"value", j}});
}

}  // namespace

struct KGraph::Impl {
  Skeleton skel;
  std::vector<IntMatrix> adjacency;
  bool no_sources = true;
  std::unordered_map<std::string, int> vertex_ids;
  std::unordered_map<std::string, int> edge_ids;
  // ij pair (color i < color j) -> ji pair, and inverse.
  std::unordered_map<std::uint64_t, std::pair<int, int>> ij_to_ji;
  std::unordered_map<std::uint64_t, std::pair<int, int>> ji_to_ij;
  // edges_in[v][c]: edges of color c with range v.
  std::vector<std::vector<std::vector<int>>> edges_in;

  mutable std::mutex memo_mutex;
  mutable std::map<Degree, std::shared_ptr<const PathTable>> memo;
};

KGraph KGraph::validate(Skeleton s, const ValidateOptions& options) {
  const int k = s.k;
  const int nv = static_cast<int>(s.vertices.size());
  const int ne = static_cast<int>(s.edges.size());
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "rank must be at least 1", {{"k", k}});

  auto impl = std::make_shared<Impl>();
  for (int v = 0; v < nv; ++v) {
    if (!impl->vertex_ids.emplace(s.vertices[v], v).second)
      throw Error(ErrorKind::DanglingReference, "duplicate vertex id", {{"vertex", s.vertices[v]}});
  }
  for (int e = 0; e < ne; ++e) {
    const Edge& ed = s.edges[e];
    if (ed.color < 0 || ed.color >= k || ed.range < 0 || ed.range >= nv || ed.source < 0 ||
        ed.source >= nv)
      throw Error(ErrorKind::DanglingReference, "edge refers to an unknown vertex or color",
                  {{"edge", ed.id}});
    if (!impl->edge_ids.emplace(ed.id, e).second)
      throw Error(ErrorKind::DanglingReference, "duplicate edge id", {{"edge", ed.id}});
  }

  auto pair_json = [&](int i, int j) { return nlohmann::json::array({i + 1, j + 1}); };

  // Squares: per ordered color pair, a bijection between composable ij and ji pairs.
  for (const Square& sq : s.squares) {
    for (int e : {sq.f, sq.g, sq.g2, sq.f2})
      if (e < 0 || e >= ne) throw Error(ErrorKind::DanglingReference, "square refers to an unknown edge");
    const Edge &f = s.edges[sq.f], &g = s.edges[sq.g], &g2 = s.edges[sq.g2], &f2 = s.edges[sq.f2];
    const int i = f.color, j = g.color;
    bool ok = i < j && f2.color == i && g2.color == j && f.source == g.range && g2.source == f2.range &&
              g2.range == f.range && f2.source == g.source;
    if (!ok)
      throw Error(ErrorKind::SquareNotBijective, "square with inconsistent colors or endpoints",
                  {{"pair", pair_json(i, j)}, {"ij_pair", {f.id, g.id}}, {"ji_pair", {g2.id, f2.id}}});
    if (!impl->ij_to_ji.emplace(pair_key(sq.f, sq.g), std::make_pair(sq.g2, sq.f2)).second)
      throw Error(ErrorKind::SquareNotBijective, "ij pair listed in two squares",
                  {{"pair", pair_json(i, j)}, {"ij_pair", {f.id, g.id}}});
    if (!impl->ji_to_ij.emplace(pair_key(sq.g2, sq.f2), std::make_pair(sq.f, sq.g)).second)
      throw Error(ErrorKind::SquareNotBijective, "ji pair listed in two squares",
                  {{"pair", pair_json(i, j)}, {"ji_pair", {g2.id, f2.id}}});
  }
  // Totality: every composable ij pair and every composable ji pair is covered.
  for (int a = 0; a < ne; ++a) {
    for (int b = 0; b < ne; ++b) {
      const Edge &x = s.edges[a], &y = s.edges[b];
      if (x.source != y.range || x.color == y.color) continue;
      if (x.color < y.color && !impl->ij_to_ji.count(pair_key(a, b)))
        throw Error(ErrorKind::SquareNotBijective, "composable pair has no square",
                    {{"pair", pair_json(x.color, y.color)}, {"ij_pair", {x.id, y.id}}});
      if (x.color > y.color && !impl->ji_to_ij.count(pair_key(a, b)))
        throw Error(ErrorKind::SquareNotBijective, "composable pair has no square",
                    {{"pair", pair_json(y.color, x.color)}, {"ji_pair", {x.id, y.id}}});
    }
  }

  impl->edges_in.assign(nv, std::vector<std::vector<int>>(k));
  for (int e = 0; e < ne; ++e) impl->edges_in[s.edges[e].range][s.edges[e].color].push_back(e);

  impl->adjacency.assign(k, IntMatrix(nv, std::vector<std::int64_t>(nv, 0)));
  for (const Edge& e : s.edges) impl->adjacency[e.color][e.range][e.source] += 1;

  for (int v = 0; v < nv; ++v) {
    for (int c = 0; c < k; ++c) {
      if (!impl->edges_in[v][c].empty()) continue;
      impl->no_sources = false;
      bool exempt = v < static_cast<int>(options.source_exempt.size()) && options.source_exempt[v];
      if (options.require_no_sources && !exempt)
        throw Error(ErrorKind::SourceVertex, "vertex receives no edge of some color",
                    {{"vertex", s.vertices[v]}, {"color", c + 1}});
    }
  }

  KGraph g;
  g.impl_ = impl;
  impl->skel = std::move(s);

  // Cubical consistency over composable triples with strictly decreasing colors.
  if (k >= 3) {
    const Skeleton& sk = impl->skel;
    for (int x = 0; x < ne; ++x) {
      for (int y : [&] {
             std::vector<int> ys;
             for (int c = 0; c < sk.edges[x].color; ++c)
               for (int e : impl->edges_in[sk.edges[x].source][c]) ys.push_back(e);
             return ys;
           }()) {
        for (int c = 0; c < sk.edges[y].color; ++c) {
          for (int z : impl->edges_in[sk.edges[y].source][c]) {
            std::vector<int> a{x, y, z}, b{x, y, z};
            g.swap_at(a, 0);
            g.swap_at(a, 1);
            g.swap_at(a, 0);
            g.swap_at(b, 1);
            g.swap_at(b, 0);
            g.swap_at(b, 1);
            if (a != b)
              throw Error(ErrorKind::CubeInconsistent, "cube condition fails",
                          {{"triple", {sk.edges[x].id, sk.edges[y].id, sk.edges[z].id}}});
          }
        }
      }
    }
  }

  // Commutation of adjacency matrices, forced by the squares.
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const auto &A = impl->adjacency[i], &B = impl->adjacency[j];
      for (int r = 0; r < nv; ++r)
        for (int c = 0; c < nv; ++c) {
          std::int64_t ab = 0, ba = 0;
          for (int t = 0; t < nv; ++t) {
            ab += A[r][t] * B[t][c];
            ba += B[r][t] * A[t][c];
          }
          if (ab != ba)
            throw Error(ErrorKind::SquareNotBijective, "adjacency matrices do not commute",
                        {{"pair", pair_json(i, j)}});
        }
    }
  }
  return g;
}

int KGraph::rank() const { return impl_->skel.k; }
int KGraph::num_vertices() const { return static_cast<int>(impl_->skel.vertices.size()); }
int KGraph::num_edges() const { return static_cast<int>(impl_->skel.edges.size()); }
const Skeleton& KGraph::skeleton() const { return impl_->skel; }
const std::vector<IntMatrix>& KGraph::adjacency() const { return impl_->adjacency; }
bool KGraph::has_no_sources() const { return impl_->no_sources; }

int KGraph::vertex_index(const std::string& id) const {
  auto it = impl_->vertex_ids.find(id);
  if (it == impl_->vertex_ids.end())
    throw Error(ErrorKind::DanglingReference, "unknown vertex", {{"vertex", id}});
  return it->second;
}

int KGraph::edge_index(const std::string& id) const {
  auto it = impl_->edge_ids.find(id);
  if (it == impl_->edge_ids.end()) throw Error(ErrorKind::DanglingReference, "unknown edge", {{"edge", id}});
  return it->second;
}

int KGraph::color(int edge) const { return impl_->skel.edges[edge].color; }

Path KGraph::vertex(int v) const { return Path{v, v, zero_degree(rank()), {}}; }

Path KGraph::edge(int e) const {
  const Edge& ed = impl_->skel.edges.at(e);
  return Path{ed.range, ed.source, unit_degree(rank(), ed.color), {e}};
}

Path KGraph::from_edges(const std::vector<int>& edges) const {
  if (edges.empty()) throw Error(ErrorKind::InvalidArgument, "use vertex() for identity paths");
  Path p = edge(edges[0]);
  for (std::size_t i = 1; i < edges.size(); ++i) p = compose(p, edge(edges[i]));
  return p;
}

void KGraph::swap_at(std::vector<int>& seq, std::size_t i) const {
  const int x = seq[i], y = seq[i + 1];
  const auto& edges = impl_->skel.edges;
  if (edges[x].color < edges[y].color) {
    auto [g2, f2] = impl_->ij_to_ji.at(pair_key(x, y));
    seq[i] = g2;
    seq[i + 1] = f2;
  } else {
    auto [f, g] = impl_->ji_to_ij.at(pair_key(x, y));
    seq[i] = f;
    seq[i + 1] = g;
  }
}

void KGraph::sort_by_keys(std::vector<int>& seq, std::vector<int>& keys) const {
  // Bubble sort; equal keys never swap, so same-color edges keep their order.
  for (std::size_t n = seq.size(); n > 1; --n) {
    bool swapped = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (keys[i] > keys[i + 1]) {
        swap_at(seq, i);
        std::swap(keys[i], keys[i + 1]);
        swapped = true;
      }
    }
    if (!swapped) break;
  }
}

Path KGraph::compose(const Path& a, const Path& b) const {
  if (a.source != b.range)
    throw Error(ErrorKind::NotComposable, "s(a) != r(b)", {{"a", describe(a)}, {"b", describe(b)}});
  Path out{a.range, b.source, a.degree + b.degree, a.edges};
  out.edges.insert(out.edges.end(), b.edges.begin(), b.edges.end());
  if (!a.edges.empty() && !b.edges.empty() && color(a.edges.back()) > color(b.edges.front())) {
    std::vector<int> keys(out.edges.size());
    for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = color(out.edges[i]);
    sort_by_keys(out.edges, keys);
  }
  return out;
}

std::pair<Path, Path> KGraph::factorize(const Path& p, const Degree& m) const {
  if (!is_nonnegative(m) || !leq(m, p.degree))
    throw Error(ErrorKind::DegreeOutOfRange, "factorization degree out of range",
                {{"degree", to_string(m)}, {"path_degree", to_string(p.degree)}});
  const int k = rank();
  std::vector<int> seq = p.edges;
  std::vector<int> keys(seq.size());
  std::vector<std::int64_t> seen(k, 0);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    int c = color(seq[i]);
    keys[i] = seen[c] < m[c] ? c : k + c;
    ++seen[c];
  }
  sort_by_keys(seq, keys);
  std::size_t cut = static_cast<std::size_t>(total(m));
  Path head{p.range, p.range, m, {seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(cut)}};
  Path tail{p.range, p.source, p.degree - m, {seq.begin() + static_cast<std::ptrdiff_t>(cut), seq.end()}};
  if (!head.edges.empty()) head.source = impl_->skel.edges[head.edges.back()].source;
  tail.range = head.source;
  return {head, tail};
}

Path KGraph::segment(const Path& p, const Degree& m, const Degree& n) const {
  if (!leq(m, n)) throw Error(ErrorKind::DegreeOutOfRange, "segment bounds out of order");
  Path upto = factorize(p, n).first;
  return factorize(upto, m).second;
}

bool KGraph::is_prefix(const Path& prefix, const Path& p) const {
  if (prefix.range != p.range || !leq(prefix.degree, p.degree)) return false;
  return factorize(p, prefix.degree).first == prefix;
}

const PathTable& KGraph::path_table(const Degree& n) const {
  {
    std::lock_guard<std::mutex> lock(impl_->memo_mutex);
    auto it = impl_->memo.find(n);
    if (it != impl_->memo.end()) return *it->second;
  }
  auto table = std::make_shared<PathTable>();
  const int k = rank();
  const int nv = num_vertices();
  std::vector<int> colors;
  for (int c = 0; c < k; ++c)
    for (std::int64_t t = 0; t < n.at(c); ++t) colors.push_back(c);
  // Paths are built right to left: the edge at position i has source equal to the
  // range of the edge at position i+1. Enumerate by range and walk forwards.
  std::vector<int> seq;
  std::vector<Path>& out = table->all;
  auto dfs = [&](auto&& self, int range, int at, std::size_t pos) -> void {
    if (pos == colors.size()) {
      out.push_back(Path{range, at, n, seq});
      return;
    }
    // Next edge e must satisfy r(e) == at (the current source).
    for (int e : impl_->edges_in[at][colors[pos]]) {
      seq.push_back(e);
      self(self, range, impl_->skel.edges[e].source, pos + 1);
      seq.pop_back();
    }
  };
  for (int v = 0; v < nv; ++v) dfs(dfs, v, v, 0);
  std::sort(out.begin(), out.end());
  table->by_range.assign(nv, {});
  table->by_source.assign(nv, {});
  for (int i = 0; i < static_cast<int>(out.size()); ++i) {
    table->by_range[out[i].range].push_back(i);
    table->by_source[out[i].source].push_back(i);
  }
  std::lock_guard<std::mutex> lock(impl_->memo_mutex);
  auto [it, inserted] = impl_->memo.emplace(n, std::move(table));
  return *it->second;
}

std::vector<Path> KGraph::paths(const Degree& n, std::optional<int> range, std::optional<int> source) const {
  const PathTable& t = path_table(n);
  std::vector<Path> out;
  if (range) {
    for (int i : t.by_range.at(*range))
      if (!source || t.all[i].source == *source) out.push_back(t.all[i]);
  } else if (source) {
    for (int i : t.by_source.at(*source)) out.push_back(t.all[i]);
  } else {
    out = t.all;
  }
  return out;
}

std::vector<Path> KGraph::paths_below(const Degree& bound) const {
  std::vector<Path> out;
  for (const Degree& d : degrees_below(bound)) {
    const auto& t = path_table(d);
    out.insert(out.end(), t.all.begin(), t.all.end());
  }
  return out;
}

std::int64_t KGraph::count(int v, const Degree& n, int w) const {
  std::int64_t c = 0;
  const PathTable& t = path_table(n);
  for (int i : t.by_range.at(v))
    if (t.all[i].source == w) ++c;
  return c;
}

std::vector<Path> KGraph::extensions(const Path& p, const Degree& n) const {
  std::vector<Path> out;
  const PathTable& t = path_table(n);
  for (int i : t.by_range.at(p.source)) out.push_back(compose(p, t.all[i]));
  return out;
}

std::vector<Path> KGraph::mce(const Path& a, const Path& b) const {
  std::vector<Path> out;
  if (a.range != b.range) return out;
  const Degree top = join(a.degree, b.degree);
  for (Path& ext : extensions(a, top - a.degree))
    if (factorize(ext, b.degree).first == b) out.push_back(std::move(ext));
  std::sort(out.begin(), out.end());
  return out;
}

std::string KGraph::describe(const Path& p) const {
  std::ostringstream os;
  if (p.edges.empty()) return impl_->skel.vertices[p.range];
  for (std::size_t i = 0; i < p.edges.size(); ++i)
    os << (i ? "." : "") << impl_->skel.edges[p.edges[i]].id;
  return os.str();
}

std::vector<std::string> KGraph::edge_ids(const Path& p) const {
  std::vector<std::string> out;
  for (int e : p.edges) out.push_back(impl_->skel.edges[e].id);
  return out;
}

Skeleton skeleton_from_json(const nlohmann::json& j) {
  Skeleton s;
  try {
    s.k = j.at("k").get<int>();
    std::unordered_map<std::string, int> vid;
    for (const auto& v : j.at("vertices")) {
      std::string id = id_from_json(v);
      vid.emplace(id, static_cast<int>(s.vertices.size()));
      s.vertices.push_back(id);
    }
    std::unordered_map<std::string, int> eid;
    for (const auto& e : j.at("edges")) {
      Edge ed;
      ed.id = id_from_json(e.at("id"));
      ed.color = e.at("color").get<int>() - 1;
      auto r = vid.find(id_from_json(e.at("range")));
      auto src = vid.find(id_from_json(e.at("source")));
      if (r == vid.end() || src == vid.end())
        throw Error(ErrorKind::DanglingReference, "edge endpoint is not a declared vertex", {{"edge", ed.id}});
      if (ed.color < 0 || ed.color >= s.k)
        throw Error(ErrorKind::DanglingReference, "edge color out of range", {{"edge", ed.id}});
      ed.range = r->second;
      ed.source = src->second;
      eid.emplace(ed.id, static_cast<int>(s.edges.size()));
      s.edges.push_back(ed);
    }
    auto lookup = [&](const nlohmann::json& x) {
      auto it = eid.find(id_from_json(x));
      if (it == eid.end()) throw Error(ErrorKind::DanglingReference, "square refers to unknown edge", {{"edge", x}});
      return it->second;
    };
    if (j.contains("squares")) {
      for (const auto& sq : j.at("squares")) {
        const auto& ij = sq.at("ij_pair");
        const auto& ji = sq.at("ji_pair");
        s.squares.push_back(Square{lookup(ij.at(0)), lookup(ij.at(1)), lookup(ji.at(0)), lookup(ji.at(1))});
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::ParseError, std::string("malformed graph JSON: ") + ex.what());
  }
  return s;
}

nlohmann::json skeleton_to_json(const Skeleton& s) {
  nlohmann::json j;
  j["k"] = s.k;
  j["vertices"] = s.vertices;
  j["edges"] = nlohmann::json::array();
  for (const Edge& e : s.edges)
    j["edges"].push_back({{"id", e.id},
                          {"color", e.color + 1},
                          {"range", s.vertices[e.range]},
                          {"source", s.vertices[e.source]}});
  j["squares"] = nlohmann::json::array();
  for (const Square& q : s.squares)
    j["squares"].push_back({{"ij_pair", {s.edges[q.f].id, s.edges[q.g].id}},
                            {"ji_pair", {s.edges[q.g2].id, s.edges[q.f2].id}}});
  return j;
}

nlohmann::json path_to_json(const KGraph& g, const Path& p) {
  nlohmann::json j;
  j["edges"] = g.edge_ids(p);
  if (p.edges.empty()) j["vertex"] = g.skeleton().vertices[p.range];
  return j;
}

Path path_from_json(const KGraph& g, const nlohmann::json& j) {
  if (j.is_object()) {
    if (j.contains("vertex") && (!j.contains("edges") || j["edges"].empty()))
      return g.vertex(g.vertex_index(id_from_json(j["vertex"])));
    return path_from_json(g, j.at("edges"));
  }
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::ParseError, "path must be a nonempty edge list");
  std::vector<int> edges;
  for (const auto& e : j) edges.push_back(g.edge_index(id_from_json(e)));
  // Validate consecutive composability before normalising.
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (g.skeleton().edges[edges[i]].source != g.skeleton().edges[edges[i + 1]].range)
      throw Error(ErrorKind::NotComposable, "edge list is not a path", {{"edges", j}});
  return g.from_edges(edges);
}

}  // namespace kgl
