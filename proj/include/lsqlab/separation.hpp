#pragma once

#include <algorithm>
#include <deque>
#include <string>
#include <vector>

#include "lsqlab/core.hpp"
#include "lsqlab/graph.hpp"
#include "lsqlab/path_system.hpp"
#include "lsqlab/staircase.hpp"

namespace lsqlab {

// m disjoint clusters N_1..N_m and, for every k, i, j in [m], a path P_k(i,j)
// from N_i to N_j.
class PathArrangement {
 public:
  PathArrangement() = default;
  PathArrangement(int m, std::vector<std::vector<Vertex>> clusters, Vertex v_start)
      : m_(m),
        clusters_(std::move(clusters)),
        v_start_(v_start),
        paths_(static_cast<std::size_t>(m) * m * m) {
    if (m < 1) throw ArgumentError("arrangement parameter must be positive");
    if (static_cast<int>(clusters_.size()) != m) {
      throw ArgumentError("arrangement needs exactly m clusters");
    }
  }

  int m() const { return m_; }
  Vertex v_start() const { return v_start_; }
  const std::vector<Vertex>& cluster(int i) const { return clusters_[i - 1]; }
  const std::vector<std::vector<Vertex>>& clusters() const { return clusters_; }

  const VertexSequence& path(int k, int i, int j) const { return paths_[index(k, i, j)]; }
  void set_path(int k, int i, int j, VertexSequence p) { paths_[index(k, i, j)] = std::move(p); }

  friend bool operator==(const PathArrangement&, const PathArrangement&) = default;

 private:
  std::size_t index(int k, int i, int j) const {
    if (k < 1 || k > m_ || i < 1 || i > m_ || j < 1 || j > m_) {
      throw ArgumentError("arrangement path index out of range");
    }
    return (static_cast<std::size_t>(k - 1) * m_ + (i - 1)) * m_ + (j - 1);
  }

  int m_ = 0;
  std::vector<std::vector<Vertex>> clusters_;
  Vertex v_start_ = 1;
  std::vector<VertexSequence> paths_;
};

// Columns of the side x side grid are the clusters; P_k(i,j) runs along row k
// from column i to column j.
inline PathArrangement grid_path_arrangement(int side) {
  if (side < 2) throw ArgumentError("grid arrangement needs side >= 2");
  auto id = [side](int row, int col) { return (row - 1) * side + col; };
  std::vector<std::vector<Vertex>> clusters(static_cast<std::size_t>(side));
  for (int col = 1; col <= side; ++col) {
    for (int row = 1; row <= side; ++row) clusters[col - 1].push_back(id(row, col));
  }
  PathArrangement pa(side, std::move(clusters), 1);
  for (int k = 1; k <= side; ++k) {
    for (int i = 1; i <= side; ++i) {
      for (int j = 1; j <= side; ++j) {
        VertexSequence p;
        const int step = j >= i ? 1 : -1;
        for (int col = i;; col += step) {
          p.push_back(id(k, col));
          if (col == j) break;
        }
        pa.set_path(k, i, j, std::move(p));
      }
    }
  }
  return pa;
}

// Returns a description of the first violated arrangement condition, if any.
inline std::optional<std::string> check_arrangement(const PathArrangement& pa, const Graph& g) {
  const int n = g.size();
  const int m = pa.m();
  std::vector<int> owner(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= m; ++i) {
    const auto& c = pa.cluster(i);
    if (c.empty()) return "cluster " + std::to_string(i) + " is empty";
    for (Vertex v : c) {
      if (v < 1 || v > n) return "cluster vertex " + std::to_string(v) + " out of range";
      if (owner[v] != 0) return "vertex " + std::to_string(v) + " lies in two clusters";
      owner[v] = i;
    }
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    std::vector<Vertex> stack{c.front()};
    seen[c.front()] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(v)) {
        if (owner[w] == i && !seen[w]) {
          seen[w] = true;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    if (reached != c.size()) return "cluster " + std::to_string(i) + " is not connected";
  }
  if (pa.v_start() < 1 || pa.v_start() > n || owner[pa.v_start()] != 1) {
    return "v_start is not in cluster 1";
  }
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= m; ++j) {
      std::vector<int> visits(static_cast<std::size_t>(n) + 1, 0);
      for (int k = 1; k <= m; ++k) {
        const auto& p = pa.path(k, i, j);
        const std::string name = "P_" + std::to_string(k) + "(" + std::to_string(i) + "," +
                                 std::to_string(j) + ")";
        if (p.empty()) return name + " is missing";
        for (Vertex v : p) {
          if (v < 1 || v > n) return name + " leaves the vertex range";
        }
        if (!all_distinct(p)) return name + " is not simple";
        for (std::size_t t = 1; t < p.size(); ++t) {
          if (!g.has_edge(p[t - 1], p[t])) return name + " uses a non-edge";
        }
        if (owner[p.front()] != i) return name + " does not start in N_" + std::to_string(i);
        if (owner[p.back()] != j) return name + " does not end in N_" + std::to_string(j);
        for (std::size_t t = 1; t + 1 < p.size(); ++t) {
          if (owner[p[t]] == i || owner[p[t]] == j) return name + " has interior inside an end cluster";
        }
        for (Vertex v : p) {
          if (owner[v] != i && owner[v] != j && ++visits[v] > 1) {
            return "vertex " + std::to_string(v) + " is visited twice by the paths between N_" +
                   std::to_string(i) + " and N_" + std::to_string(j);
          }
        }
      }
    }
  }
  return std::nullopt;
}

inline bool verify_arrangement(const PathArrangement& pa, const Graph& g) {
  return !check_arrangement(pa, g).has_value();
}

class ClusterSequence {
 public:
  explicit ClusterSequence(std::vector<int> entries) : entries_(std::move(entries)) {
    if (entries_.empty() || entries_.size() % 2 == 0) {
      throw ArgumentError("cluster sequence needs 2c+1 entries");
    }
    if (entries_.front() != 1) throw ArgumentError("cluster sequence must start with cluster 1");
  }
  int legs() const { return static_cast<int>(entries_.size() - 1) / 2; }
  int at(int i) const { return entries_[static_cast<std::size_t>(i - 1)]; }
  const std::vector<int>& values() const { return entries_; }

  friend bool operator==(const ClusterSequence&, const ClusterSequence&) = default;

 private:
  std::vector<int> entries_;
};

inline bool is_good(const ClusterSequence& x) { return all_distinct(x.values()); }

// Shortest path inside the cluster's induced subgraph, lowest-id predecessor
// on ties.
inline VertexSequence intra_cluster_path(const Graph& g, const std::vector<Vertex>& cluster,
                                         Vertex from, Vertex to) {
  const int n = g.size();
  std::vector<bool> inside(static_cast<std::size_t>(n) + 1, false);
  for (Vertex v : cluster) inside[v] = true;
  if (!inside[from] || !inside[to]) throw ArgumentError("intra-cluster path endpoints outside cluster");
  VertexMap<int> dist(n, -1);
  std::deque<Vertex> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (Vertex w : g.neighbors(v)) {
      if (inside[w] && dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  if (dist[to] < 0) throw ValidationError("cluster is not connected");
  VertexSequence reversed{to};
  Vertex cur = to;
  while (dist[cur] > 0) {
    for (Vertex w : g.neighbors(cur)) {
      if (inside[w] && dist[w] == dist[cur] - 1) {
        cur = w;
        break;
      }
    }
    reversed.push_back(cur);
  }
  return {reversed.rbegin(), reversed.rend()};
}

// S_x = S_{x,1} o ... o S_{x,2c}. Odd legs move inside a cluster, even legs
// follow the arrangement's inter-cluster paths.
inline VertexSequence cluster_staircase(const ClusterSequence& x, const PathArrangement& pa,
                                        const Graph& g) {
  for (int e : x.values()) {
    if (e < 1 || e > pa.m()) throw ArgumentError("cluster sequence entry outside [1,m]");
  }
  const int top = 2 * x.legs();
  VertexSequence walk{pa.v_start()};
  auto append = [&walk](const VertexSequence& p) { walk.insert(walk.end(), p.begin() + 1, p.end()); };
  for (int i = 1; i <= top; ++i) {
    if (i % 2 == 0) {
      append(pa.path(x.at(i), x.at(i - 1), x.at(i + 1)));
      continue;
    }
    const Vertex entry = i == 1 ? pa.v_start() : pa.path(x.at(i - 1), x.at(i - 2), x.at(i)).back();
    const Vertex exit = pa.path(x.at(i + 1), x.at(i), x.at(i + 2)).front();
    append(intra_cluster_path(g, pa.cluster(x.at(i)), entry, exit));
  }
  return walk;
}

// On-walk value is minus the last 1-based position; off-walk is the distance
// to the walk's first vertex.
inline ValueFunction walk_value_function(const VertexSequence& walk, const Graph& g) {
  const int n = g.size();
  const auto dist = bfs_distances(g, walk.front());
  ValueFunction f(n, 0);
  std::vector<bool> on_walk(static_cast<std::size_t>(n) + 1, false);
  for (std::size_t i = 0; i < walk.size(); ++i) {
    on_walk[walk[i]] = true;
    f[walk[i]] = -static_cast<std::int64_t>(i + 1);
  }
  for (Vertex v = 1; v <= n; ++v) {
    if (!on_walk[v]) f[v] = dist[v];
  }
  return f;
}

inline ValueFunction separation_value_function(const ClusterSequence& x, const PathArrangement& pa,
                                               const Graph& g) {
  return walk_value_function(cluster_staircase(x, pa, g), g);
}

// Largest odd j with x_{1..j} = y_{1..j}.
inline int odd_agreeing_prefix(const std::vector<int>& x, const std::vector<int>& y) {
  int j = agreeing_prefix(x, y);
  if (j % 2 == 0) --j;
  return j;
}

inline BigNat relation_separation(const ClusterSequence& x, int b1, const ClusterSequence& y,
                                  int b2, int m) {
  if (x.legs() != y.legs()) throw ArgumentError("relation needs sequences with equal c");
  if (b1 == b2 || !is_good(x) || !is_good(y)) return 0;
  return big_pow(m, static_cast<unsigned>(odd_agreeing_prefix(x.values(), y.values())));
}

// max(floor(sqrt(s / (2 delta))), 1) in integer arithmetic.
inline int arrangement_parameter_bound(long long s, long long delta) {
  if (delta < 1) throw ArgumentError("arrangement bound needs delta >= 1");
  if (s < 0) throw ArgumentError("arrangement bound needs s >= 0");
  long long k = 0;
  while ((k + 1) * (k + 1) * 2 * delta <= s) ++k;
  return static_cast<int>(std::max(k, 1LL));
}

}  // namespace lsqlab
