#pragma once

#include <vector>

#include "lsqlab/lsqlab.hpp"

namespace fixtures {

using namespace lsqlab;

inline Graph graph_of(GraphKind kind, int size) {
  GraphSpec spec;
  spec.kind = kind;
  spec.n = size;
  spec.dim = size;
  spec.side = size;
  return build_graph(spec);
}

inline Graph path_graph(int n) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.emplace_back(v, v + 1);
  return Graph(n, edges);
}

// 4x4 row-major grid with three hand-picked quasi-segments.
struct GridExample {
  Graph g = graph_of(GraphKind::grid, 4);
  PathSystem ps = shortest_path_system(g).with_paths(
      {{1, 2, 3, 7, 6}, {6, 10, 11}, {11, 7, 8, 12, 16}});
  MilestoneSequence x{{1, 6, 11, 16}};
};

// Twelve-vertex graph whose staircase revisits vertices 6 and 3.
struct RevisitExample {
  Graph g{12, {{1, 3}, {3, 5}, {5, 6}, {6, 7}, {7, 8}, {8, 9}, {6, 9}, {6, 10}, {3, 10}, {3, 11},
               {1, 2}, {2, 4}, {11, 12}}};
  PathSystem ps = shortest_path_system(g).with_paths(
      {{1, 3, 5, 6}, {6, 7, 8}, {8, 9, 6}, {6, 10, 3, 11}});
  MilestoneSequence x{{1, 6, 8, 6, 11}};
};

// Nine vertices v0..v8 (ids 1..9): three triangles {v0,v3,v6}, {v1,v4,v7},
// {v2,v5,v8} and three paths v0-v1-v2, v3-v4-v5, v6-v7-v8. Clusters are the
// paths; P_k(i,j) goes from the k-th vertex of N_i through the k-th vertex of
// the remaining cluster to the k-th vertex of N_j.
struct NineNodeExample {
  static Vertex v(int k) { return k + 1; }

  Graph g{9, {{v(0), v(3)}, {v(3), v(6)}, {v(0), v(6)}, {v(1), v(4)}, {v(4), v(7)}, {v(1), v(7)},
              {v(2), v(5)}, {v(5), v(8)}, {v(2), v(8)}, {v(0), v(1)}, {v(1), v(2)}, {v(3), v(4)},
              {v(4), v(5)}, {v(6), v(7)}, {v(7), v(8)}}};
  PathArrangement pa = make_arrangement();

  static PathArrangement make_arrangement() {
    auto member = [](int cluster, int k) { return v(3 * (cluster - 1) + (k - 1)); };
    PathArrangement pa(3, {{v(0), v(1), v(2)}, {v(3), v(4), v(5)}, {v(6), v(7), v(8)}}, v(0));
    for (int k = 1; k <= 3; ++k) {
      for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
          if (i == j) {
            pa.set_path(k, i, j, {member(i, k)});
          } else {
            const int third = 6 - i - j;
            pa.set_path(k, i, j, {member(i, k), member(third, k), member(j, k)});
          }
        }
      }
    }
    return pa;
  }
};

}  // namespace fixtures
