#pragma once

#include <string>
#include <vector>

#include "kgl/graph.hpp"

namespace kgl {

/// N^k as a k-graph: one vertex, one loop per color.
KGraph torus_graph(int k);
/// One vertex with n loops (rank 1).
KGraph cuntz_graph(int n);
/// Directed n-cycle (rank 1).
KGraph cycle_graph(int n);
/// Two vertices; each color swaps them (A_1 = A_2 = [[0,1],[1,0]]).
KGraph flip_graph();
/// Two vertices with every color-i edge v -> w present once; squares exchange the middle vertex.
KGraph full_two_vertex_graph();
/// Cartesian product of two 1-graphs.
KGraph product_graph(const KGraph& e, const KGraph& f);
KGraph disjoint_union(const KGraph& a, const KGraph& b);

/// Named examples: T_k, O_n, C_n, flip, full2, line, A+B, AxB, NAME@a:b,... (window).
KGraph example_graph(const std::string& name);
std::vector<std::string> catalog_names();

}  // namespace kgl
