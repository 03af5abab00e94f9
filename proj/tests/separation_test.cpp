#include <gtest/gtest.h>

#include <functional>

#include "fixtures.hpp"

using namespace lsqlab;
using fixtures::graph_of;
using fixtures::NineNodeExample;

namespace {

std::vector<std::vector<int>> good_cluster_sequences(int m, int c) {
  std::vector<std::vector<int>> out;
  std::vector<int> xs(2 * c + 1, 1);
  std::function<void(int)> fill = [&](int pos) {
    if (pos == static_cast<int>(xs.size())) {
      if (all_distinct(xs)) out.push_back(xs);
      return;
    }
    for (int e = 1; e <= m; ++e) {
      xs[pos] = e;
      fill(pos + 1);
    }
  };
  fill(1);
  return out;
}

// Product (m-j-1) * prod_{i=j+2}^{top} (m-i+1), written out independently.
long long closed_form(int m, int j, int top) {
  long long value = m - j - 1;
  for (int i = j + 2; i <= top; ++i) value *= m - i + 1;
  return value;
}

}  // namespace

TEST(Arrangement, GridSidesVerify) {
  for (int side = 2; side <= 4; ++side) {
    const Graph g = graph_of(GraphKind::grid, side);
    const PathArrangement pa = grid_path_arrangement(side);
    EXPECT_EQ(pa.m(), side);
    EXPECT_EQ(check_arrangement(pa, g), std::nullopt) << *check_arrangement(pa, g);
  }
}

TEST(Arrangement, GridThreeLayout) {
  const PathArrangement pa = grid_path_arrangement(3);
  EXPECT_EQ(pa.cluster(1), (std::vector<Vertex>{1, 4, 7}));
  EXPECT_EQ(pa.path(2, 1, 3), (VertexSequence{4, 5, 6}));
  EXPECT_EQ(pa.path(3, 2, 2), (VertexSequence{8}));
  EXPECT_EQ(pa.v_start(), 1);
}

TEST(Arrangement, DuplicateInteriorVertexRejected) {
  const Graph g = graph_of(GraphKind::grid, 3);
  PathArrangement pa = grid_path_arrangement(3);
  // P_1(1,3) already passes through vertex 2.
  pa.set_path(2, 1, 3, {4, 5, 2, 3});
  EXPECT_FALSE(verify_arrangement(pa, g));
  pa = grid_path_arrangement(3);
  pa.set_path(1, 1, 2, {1, 3});
  EXPECT_FALSE(verify_arrangement(pa, g));
}

TEST(Arrangement, NineNodeArrangementVerifies) {
  NineNodeExample ex;
  EXPECT_EQ(check_arrangement(ex.pa, ex.g), std::nullopt) << *check_arrangement(ex.pa, ex.g);
}

TEST(ClusterStaircase, NineNodeWalk) {
  NineNodeExample ex;
  const auto v = &NineNodeExample::v;
  const VertexSequence walk = cluster_staircase(ClusterSequence({1, 3, 3, 1, 2}), ex.pa, ex.g);
  EXPECT_EQ(walk, (VertexSequence{v(0), v(1), v(2), v(5), v(8), v(7), v(6), v(0), v(3)}));
  const ValueFunction f = walk_value_function(walk, ex.g);
  EXPECT_EQ(f[v(0)], -8);
  EXPECT_EQ(f[v(3)], -9);
  EXPECT_EQ(f[v(4)], 2);
  EXPECT_EQ(local_minima(ex.g, f), (std::vector<Vertex>{v(3)}));
}

TEST(ClusterStaircase, EntriesMustBeInRange) {
  NineNodeExample ex;
  EXPECT_THROW(cluster_staircase(ClusterSequence({1, 4, 2}), ex.pa, ex.g), ArgumentError);
  EXPECT_THROW(ClusterSequence({1, 2}), ArgumentError);
  EXPECT_THROW(ClusterSequence({2, 1, 3}), ArgumentError);
}

TEST(ClusterStaircase, WalksAreEdgeConsecutive) {
  const Graph g = graph_of(GraphKind::grid, 4);
  const PathArrangement pa = grid_path_arrangement(4);
  for (const auto& xs : good_cluster_sequences(4, 1)) {
    const VertexSequence walk = cluster_staircase(ClusterSequence(xs), pa, g);
    ASSERT_EQ(walk.front(), pa.v_start());
    for (std::size_t i = 1; i < walk.size(); ++i) ASSERT_TRUE(g.has_edge(walk[i - 1], walk[i]));
  }
}

TEST(ClusterStaircase, StartOnlyWalk) {
  const Graph g = graph_of(GraphKind::grid, 3);
  const ValueFunction f = walk_value_function({1}, g);
  EXPECT_EQ(f[1], -1);
  const auto d = bfs_distances(g, 1);
  for (Vertex u = 2; u <= 9; ++u) EXPECT_EQ(f[u], d[u]);
}

TEST(SeparationFunction, ValidWithUniqueMinimumOnSideThree) {
  const Graph g = graph_of(GraphKind::grid, 3);
  const PathArrangement pa = grid_path_arrangement(3);
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b) {
      const ClusterSequence x({1, a, b});
      const VertexSequence walk = cluster_staircase(x, pa, g);
      const ValueFunction f = separation_value_function(x, pa, g);
      ASSERT_TRUE(validate_function(g, f, walk)) << *check_valid(g, f, walk);
      ASSERT_EQ(local_minima(g, f), (std::vector<Vertex>{walk.back()}));
    }
}

TEST(SeparationRelation, Examples) {
  const ClusterSequence x({1, 2, 3}), y({1, 4, 3});
  EXPECT_EQ(relation_separation(x, 0, y, 1, 4), 4);
  EXPECT_EQ(relation_separation(x, 0, x, 1, 4), 64);
  EXPECT_EQ(relation_separation(x, 1, y, 1, 4), 0);
  EXPECT_EQ(relation_separation(x, 0, ClusterSequence({1, 2, 2}), 1, 4), 0);
  EXPECT_THROW(relation_separation(x, 0, ClusterSequence({1, 2, 3, 4, 5}), 1, 6), ArgumentError);
  // Agreement through index 2 still rounds down to the odd index 1.
  EXPECT_EQ(relation_separation(x, 0, ClusterSequence({1, 2, 4}), 1, 4), 4);
}

TEST(SeparationRelation, OddPrefix) {
  EXPECT_EQ(odd_agreeing_prefix({1, 2, 3, 4, 5}, {1, 2, 3, 4, 6}), 3);
  EXPECT_EQ(odd_agreeing_prefix({1, 2, 3, 4, 5}, {1, 2, 3, 6, 5}), 3);
  EXPECT_EQ(odd_agreeing_prefix({1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}), 5);
  EXPECT_EQ(odd_agreeing_prefix({1, 2, 3}, {1, 3, 2}), 1);
}

TEST(SeparationCount, PlainPrefixMatchesClosedForm) {
  for (int m = 3; m <= 6; ++m)
    for (int c = 1; c <= 2; ++c) {
      const int top = 2 * c + 1;
      if (top > m) continue;
      const auto good = good_cluster_sequences(m, c);
      for (const auto& x : good)
        for (int j = 1; j < top; j += 2) {
          long long plain = 0;
          for (const auto& y : good) plain += agreeing_prefix(x, y) == j;
          ASSERT_EQ(plain, closed_form(m, j, top)) << "m=" << m << " c=" << c << " j=" << j;
        }
    }
}

TEST(SeparationCount, OddClassIsClosedFormPlusNextPrefix) {
  for (int m = 3; m <= 6; ++m)
    for (int c = 1; c <= 2; ++c) {
      const int top = 2 * c + 1;
      if (top > m) continue;
      const auto good = good_cluster_sequences(m, c);
      for (const auto& x : good)
        for (int j = 1; j < top; j += 2) {
          long long odd = 0;
          for (const auto& y : good) odd += odd_agreeing_prefix(x, y) == j;
          ASSERT_EQ(odd, closed_form(m, j, top) + closed_form(m, j + 1, top));
          ASSERT_GE(odd, closed_form(m, j, top));
        }
    }
}

TEST(SeparationCount, SmallestCaseOddClassExceedsClosedForm) {
  const auto good = good_cluster_sequences(4, 1);
  const std::vector<int> x{1, 2, 3};
  long long odd = 0;
  for (const auto& y : good) odd += odd_agreeing_prefix(x, y) == 1;
  EXPECT_EQ(odd, 5);
  EXPECT_EQ(closed_form(4, 1, 3), 4);
}

TEST(SeparationMass, FrozenValues) {
  auto mass = [](int m, int c) {
    const auto good = good_cluster_sequences(m, c);
    const auto all = [&] {
      std::vector<std::vector<int>> seqs;
      std::vector<int> xs(2 * c + 1, 1);
      std::function<void(int)> fill = [&](int pos) {
        if (pos == static_cast<int>(xs.size())) {
          seqs.push_back(xs);
          return;
        }
        for (int e = 1; e <= m; ++e) {
          xs[pos] = e;
          fill(pos + 1);
        }
      };
      fill(1);
      return seqs;
    }();
    BigNat total = 0;
    const ClusterSequence x(good.front());
    for (const auto& y : all) total += relation_separation(x, 0, ClusterSequence(y), 1, m);
    return total;
  };
  EXPECT_EQ(mass(4, 1), 84);
  EXPECT_EQ(mass(5, 2), 3360);
  EXPECT_EQ(mass(6, 2), 9540);
}

TEST(ParameterBound, HandValues) {
  EXPECT_EQ(arrangement_parameter_bound(162, 1), 9);
  EXPECT_EQ(arrangement_parameter_bound(0, 1), 1);
  EXPECT_EQ(arrangement_parameter_bound(8, 1), 2);
  EXPECT_EQ(arrangement_parameter_bound(7, 1), 1);
  EXPECT_EQ(arrangement_parameter_bound(324, 2), 9);
  EXPECT_THROW(arrangement_parameter_bound(10, 0), ArgumentError);
}
