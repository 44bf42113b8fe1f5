#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kgl/degree.hpp"

namespace kgl {

/// Edge of a skeleton. Colors are 0-based internally, 1-based in JSON.
struct Edge {
  std::string id;
  int color = 0;
  int range = 0;
  int source = 0;
};

/// One factorisation square: f g = g2 f2 with color(f) = color(f2) < color(g) = color(g2).
struct Square {
  int f = 0;
  int g = 0;
  int g2 = 0;
  int f2 = 0;
};

struct Skeleton {
  int k = 1;
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  std::vector<Square> squares;
};

/// A morphism in color-normal form. Identity paths have no edges.
struct Path {
  int range = 0;
  int source = 0;
  Degree degree;
  std::vector<int> edges;

  bool is_vertex() const { return edges.empty(); }
  auto operator<=>(const Path&) const = default;
  bool operator==(const Path&) const = default;
};

using IntMatrix = std::vector<std::vector<std::int64_t>>;

struct ValidateOptions {
  bool require_no_sources = true;
  // Vertices excused from the no-sources check (used for finite windows).
  std::vector<bool> source_exempt;
};

struct PathTable {
  std::vector<Path> all;
  std::vector<std::vector<int>> by_range;
  std::vector<std::vector<int>> by_source;
};

/// Validated finite k-graph. Copies share the (internally synchronised) path memo.
class KGraph {
 public:
  static KGraph validate(Skeleton skeleton, const ValidateOptions& options = {});

  int rank() const;
  int num_vertices() const;
  int num_edges() const;
  const Skeleton& skeleton() const;
  const std::vector<IntMatrix>& adjacency() const;
  bool has_no_sources() const;

  int vertex_index(const std::string& id) const;
  int edge_index(const std::string& id) const;
  int color(int edge) const;

  Path vertex(int v) const;
  Path edge(int e) const;
  Path from_edges(const std::vector<int>& edges) const;

  const PathTable& path_table(const Degree& n) const;
  std::vector<Path> paths(const Degree& n, std::optional<int> range = std::nullopt,
                          std::optional<int> source = std::nullopt) const;
  /// All paths with 0 <= degree <= bound.
  std::vector<Path> paths_below(const Degree& bound) const;
  std::int64_t count(int v, const Degree& n, int w) const;

  Path compose(const Path& a, const Path& b) const;
  std::pair<Path, Path> factorize(const Path& p, const Degree& m) const;
  /// The segment p(m, n) for m <= n <= d(p).
  Path segment(const Path& p, const Degree& m, const Degree& n) const;
  bool is_prefix(const Path& prefix, const Path& p) const;
  std::vector<Path> extensions(const Path& p, const Degree& n) const;
  std::vector<Path> mce(const Path& a, const Path& b) const;

  std::string describe(const Path& p) const;
  std::vector<std::string> edge_ids(const Path& p) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;

  void swap_at(std::vector<int>& seq, std::size_t i) const;
  void sort_by_keys(std::vector<int>& seq, std::vector<int>& keys) const;
};

Skeleton skeleton_from_json(const nlohmann::json& j);
nlohmann::json skeleton_to_json(const Skeleton& s);
nlohmann::json path_to_json(const KGraph& g, const Path& p);
Path path_from_json(const KGraph& g, const nlohmann::json& j);

}  // namespace kgl
