#include "kgl/catalog.hpp"

#include <map>

#include "kgl/error.hpp"
#include "kgl/skew.hpp"

namespace kgl {

namespace {

int parse_count(const std::string& s, const std::string& name) {
  try {
    std::size_t used = 0;
    int n = std::stoi(s, &used);
    if (used == s.size() && n >= 1) return n;
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorKind::InvalidArgument, "bad parameter in example name", {{"name", name}});
}

}  // namespace

KGraph torus_graph(int k) {
  Skeleton s;
  s.k = k;
  s.vertices = {"v"};
  for (int c = 0; c < k; ++c) s.edges.push_back(Edge{"e" + std::to_string(c + 1), c, 0, 0});
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) s.squares.push_back(Square{i, j, j, i});
  return KGraph::validate(std::move(s));
}

KGraph cuntz_graph(int n) {
  Skeleton s;
  s.k = 1;
  s.vertices = {"v"};
  for (int i = 0; i < n; ++i) {
    std::string id = n <= 26 ? std::string(1, static_cast<char>('a' + i)) : "a" + std::to_string(i);
    s.edges.push_back(Edge{id, 0, 0, 0});
  }
  return KGraph::validate(std::move(s));
}

KGraph cycle_graph(int n) {
  Skeleton s;
  s.k = 1;
  for (int i = 0; i < n; ++i) s.vertices.push_back("v" + std::to_string(i));
  for (int i = 0; i < n; ++i) s.edges.push_back(Edge{"e" + std::to_string(i), 0, i, (i + 1) % n});
  return KGraph::validate(std::move(s));
}

KGraph flip_graph() {
  Skeleton s;
  s.k = 2;
  s.vertices = {"u", "v"};
  s.edges = {Edge{"a1", 0, 0, 1}, Edge{"a2", 0, 1, 0}, Edge{"b1", 1, 0, 1}, Edge{"b2", 1, 1, 0}};
  // a1 b2 = b1 a2 and a2 b1 = b2 a1
  s.squares = {Square{0, 3, 2, 1}, Square{1, 2, 3, 0}};
  return KGraph::validate(std::move(s));
}

KGraph full_two_vertex_graph() {
  Skeleton s;
  s.k = 2;
  s.vertices = {"u", "v"};
  auto eid = [](int color, int x, int y) { return color * 4 + x * 2 + y; };
  const char* names[2] = {"u", "v"};
  for (int color = 0; color < 2; ++color)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        s.edges.push_back(Edge{std::string(color ? "f" : "e") + names[x] + names[y], color, x, y});
  // e_{xy} f_{yz} = f_{xy'} e_{y'z} with y' the other vertex.
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) s.squares.push_back(Square{eid(0, x, y), eid(1, y, z), eid(1, x, 1 - y), eid(0, 1 - y, z)});
  return KGraph::validate(std::move(s));
}

KGraph product_graph(const KGraph& e, const KGraph& f) {
  if (e.rank() != 1 || f.rank() != 1) throw Error(ErrorKind::InvalidArgument, "product needs two 1-graphs");
  const Skeleton& se = e.skeleton();
  const Skeleton& sf = f.skeleton();
  const int ne = e.num_vertices(), nf = f.num_vertices();
  Skeleton s;
  s.k = 2;
  auto vid = [&](int a, int b) { return a * nf + b; };
  for (int a = 0; a < ne; ++a)
    for (int b = 0; b < nf; ++b) s.vertices.push_back(se.vertices[a] + "." + sf.vertices[b]);
  // color 1: (edge of E, vertex of F); color 2: (vertex of E, edge of F)
  std::map<std::pair<int, int>, int> first, second;
  for (int x = 0; x < static_cast<int>(se.edges.size()); ++x)
    for (int b = 0; b < nf; ++b) {
      first[{x, b}] = static_cast<int>(s.edges.size());
      s.edges.push_back(Edge{se.edges[x].id + "." + sf.vertices[b], 0, vid(se.edges[x].range, b), vid(se.edges[x].source, b)});
    }
  for (int a = 0; a < ne; ++a)
    for (int y = 0; y < static_cast<int>(sf.edges.size()); ++y) {
      second[{a, y}] = static_cast<int>(s.edges.size());
      s.edges.push_back(Edge{se.vertices[a] + "." + sf.edges[y].id, 1, vid(a, sf.edges[y].range), vid(a, sf.edges[y].source)});
    }
  for (int x = 0; x < static_cast<int>(se.edges.size()); ++x)
    for (int y = 0; y < static_cast<int>(sf.edges.size()); ++y) {
      const Edge& ex = se.edges[x];
      const Edge& fy = sf.edges[y];
      s.squares.push_back(Square{first.at({x, fy.range}), second.at({ex.source, y}), second.at({ex.range, y}),
                                 first.at({x, fy.source})});
    }
  return KGraph::validate(std::move(s));
}

KGraph disjoint_union(const KGraph& a, const KGraph& b) {
  if (a.rank() != b.rank()) throw Error(ErrorKind::GraphMismatch, "disjoint union needs equal ranks");
  Skeleton s = a.skeleton();
  const Skeleton& t = b.skeleton();
  for (auto& v : s.vertices) v = "L." + v;
  for (auto& e : s.edges) e.id = "L." + e.id;
  const int nv = static_cast<int>(s.vertices.size());
  const int ne = static_cast<int>(s.edges.size());
  for (const auto& v : t.vertices) s.vertices.push_back("R." + v);
  for (Edge e : t.edges) {
    e.id = "R." + e.id;
    e.range += nv;
    e.source += nv;
    s.edges.push_back(e);
  }
  for (Square q : t.squares) s.squares.push_back(Square{q.f + ne, q.g + ne, q.g2 + ne, q.f2 + ne});
  return KGraph::validate(std::move(s));
}

KGraph example_graph(const std::string& name) {
  auto at = name.find('@');
  if (at != std::string::npos) {
    KGraph base = example_graph(name.substr(0, at));
    return build_window(base, parse_box(name.substr(at + 1))).graph;
  }
  auto plus = name.find('+');
  if (plus != std::string::npos) return disjoint_union(example_graph(name.substr(0, plus)), example_graph(name.substr(plus + 1)));
  auto times = name.find('x');
  if (times != std::string::npos && name != "flip")
    return product_graph(example_graph(name.substr(0, times)), example_graph(name.substr(times + 1)));
  if (name.rfind("T_", 0) == 0) return torus_graph(parse_count(name.substr(2), name));
  if (name.rfind("O_", 0) == 0) return cuntz_graph(parse_count(name.substr(2), name));
  if (name.rfind("C_", 0) == 0) return cycle_graph(parse_count(name.substr(2), name));
  if (name == "flip") return flip_graph();
  if (name == "full2") return full_two_vertex_graph();
  if (name == "line") return build_window(torus_graph(1), {{-2, 2}}).graph;
  throw Error(ErrorKind::InvalidArgument, "unknown example '" + name + "'", {{"known", catalog_names()}});
}

std::vector<std::string> catalog_names() {
  return {"T_1", "T_2", "T_3", "O_2", "O_3", "C_2", "C_3", "flip", "full2", "line", "O_2xC_2", "T_2+T_2", "O_2@0:4"};
}

}  // namespace kgl
