#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kgl/cocycle.hpp"
#include "kgl/graph.hpp"

namespace kgl {

using Box = std::vector<std::pair<std::int64_t, std::int64_t>>;  // inclusive intervals

/// Parses "a1:b1,a2:b2,...".
Box parse_box(const std::string& text);
std::string box_to_string(const Box& box);

/// Finite window of the skew product by the degree map.
struct SkewWindow {
  KGraph base;
  Box box;
  KGraph graph;
  std::vector<int> base_vertex;
  std::vector<Degree> offset;
  std::vector<int> base_edge;
  /// Vertices (v, n) with n + (1,...,1) still inside the box; these receive every color.
  std::vector<bool> interior;
  std::map<std::pair<int, Degree>, int> lookup;
  std::map<std::pair<int, Degree>, int> edge_lookup;

  std::optional<int> vertex_at(int base_v, const Degree& n) const;
  /// The lift (lambda, n); nothing if it leaves the window.
  std::optional<Path> lift(const Path& base_path, const Degree& n) const;
  Path project(const Path& p) const;
};

SkewWindow build_window(const KGraph& g, const Box& box);

/// c o phi where phi(lambda, n) = lambda.
Cocycle2 pullback_cocycle(const SkewWindow& w, const Cocycle2& c);

/// Partial isomorphism (lambda, m) -> (lambda, m + n) of a window.
struct Translation {
  Degree shift;
  std::vector<std::optional<int>> vertex_map;
  std::vector<std::optional<int>> edge_map;
  std::optional<Path> apply(const KGraph& g, const Path& p) const;
};

Translation translation_action(const SkewWindow& w, const Degree& n);

// ---------------------------------------------------------------- AF stages

struct AfStage {
  Degree n;
  std::vector<int> blocks;          // vertices with b(v) = n
  std::vector<std::int64_t> dims;   // |Lambda v| per block
};

struct KappaEntry {
  Path path;
  AbelianValue value;
};

struct AfReport {
  std::vector<Degree> b0;  // normalised: nonnegative, minimum 0 in each coordinate
  std::vector<AfStage> stages;
  /// connecting[i](a, b) = |v_a Lambda^{n_{i+1} - n_i} w_b| for blocks of stages i, i+1.
  std::vector<IntMatrix> connecting;
  std::vector<KappaEntry> kappa;
  bool kappa_well_defined = true;
  std::size_t kappa_checked = 0;
  nlohmann::json kappa_counterexamples = nlohmann::json::array();

  nlohmann::json to_json(const KGraph& g) const;
};

/// Counting matrix |v Lambda^step w| between two vertex lists.
IntMatrix stage_matrix(const KGraph& g, const std::vector<int>& from, const std::vector<int>& to,
                       const Degree& step);

AfReport af_stages(const KGraph& g, const Cocycle2& c, const std::vector<Degree>& stages);

}  // namespace kgl
