#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lsqlab/core.hpp"
#include "lsqlab/random.hpp"

namespace lsqlab {

using Edge = std::pair<Vertex, Vertex>;

class Graph {
 public:
  Graph() = default;

  // Builds an undirected graph on 1..n. Edges may be given in either
  // orientation; self-loops, parallel edges, out-of-range endpoints and
  // disconnected results are rejected.
  Graph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 1) throw ConstructionError("graph needs at least one vertex");
    for (auto& [u, v] : edges) {
      if (u < 1 || u > n || v < 1 || v > n) {
        throw ConstructionError("edge {" + std::to_string(u) + "," + std::to_string(v) +
                                "} out of range for n=" + std::to_string(n));
      }
      if (u == v) throw ConstructionError("self-loop at vertex " + std::to_string(u));
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
      throw ConstructionError("parallel edge in edge list");
    }
    edges_ = std::move(edges);
    adjacency_.assign(static_cast<std::size_t>(n), {});
    for (const auto& [u, v] : edges_) {
      adjacency_[u - 1].push_back(v);
      adjacency_[v - 1].push_back(u);
    }
    for (auto& list : adjacency_) {
      std::sort(list.begin(), list.end());
      max_degree_ = std::max(max_degree_, static_cast<int>(list.size()));
    }
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<Vertex> stack{1};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : adjacency_[v - 1]) {
        if (!seen[w - 1]) {
          seen[w - 1] = true;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    if (reached != n) throw ConstructionError("graph is disconnected");
  }

  int size() const { return n_; }
  int max_degree() const { return max_degree_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v - 1]; }
  int degree(Vertex v) const { return static_cast<int>(adjacency_[v - 1].size()); }

  bool has_edge(Vertex u, Vertex v) const {
    if (u < 1 || u > n_ || v < 1 || v > n_) return false;
    const auto& list = adjacency_[u - 1];
    return std::binary_search(list.begin(), list.end(), v);
  }

  // Image of the graph under the vertex map v -> perm[v-1].
  Graph relabeled(const std::vector<Vertex>& perm) const {
    std::vector<Edge> mapped;
    mapped.reserve(edges_.size());
    for (const auto& [u, v] : edges_) mapped.emplace_back(perm[u - 1], perm[v - 1]);
    return Graph(n_, std::move(mapped));
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  int max_degree_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
};

// Finite group given by its multiplication table over elements 1..n with
// table[a-1][b-1] = a*b. Element 1 must be the identity.
struct CayleyGroup {
  std::vector<std::vector<int>> table;
  std::vector<int> generators;

  int order() const { return static_cast<int>(table.size()); }
  int multiply(int a, int b) const { return table[a - 1][b - 1]; }

  int inverse(int a) const {
    for (int b = 1; b <= order(); ++b) {
      if (multiply(a, b) == 1) return b;
    }
    throw ValidationError("element " + std::to_string(a) + " has no inverse");
  }

  void validate() const {
    const int n = order();
    if (n < 1) throw ValidationError("empty group table");
    for (const auto& row : table) {
      if (static_cast<int>(row.size()) != n) throw ValidationError("group table is not square");
      for (int entry : row) {
        if (entry < 1 || entry > n) throw ValidationError("group table entry out of range");
      }
    }
    for (int a = 1; a <= n; ++a) {
      if (multiply(1, a) != a || multiply(a, 1) != a) {
        throw ValidationError("element 1 is not the identity");
      }
    }
    for (int a = 1; a <= n; ++a) {
      std::vector<bool> row_seen(n + 1, false);
      for (int b = 1; b <= n; ++b) {
        int p = multiply(a, b);
        if (row_seen[p]) throw ValidationError("group table row is not a permutation");
        row_seen[p] = true;
      }
    }
    for (int a = 1; a <= n; ++a) {
      for (int b = 1; b <= n; ++b) {
        for (int c = 1; c <= n; ++c) {
          if (multiply(multiply(a, b), c) != multiply(a, multiply(b, c))) {
            throw ValidationError("group table is not associative");
          }
        }
      }
    }
    for (int s : generators) {
      if (s < 1 || s > n) throw ValidationError("generator out of range");
      if (s == 1) throw ValidationError("identity cannot be a generator");
      int inv = inverse(s);
      if (std::find(generators.begin(), generators.end(), inv) == generators.end()) {
        throw ValidationError("generator set is not closed under inverses");
      }
    }
  }
};

// Z_n with elements 1..n standing for residues 0..n-1. Generators are given as
// residues.
inline CayleyGroup cyclic_group(int n, const std::vector<int>& residue_generators) {
  if (n < 1) throw ArgumentError("cyclic group order must be positive");
  CayleyGroup group;
  group.table.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) group.table[a][b] = (a + b) % n + 1;
  }
  for (int r : residue_generators) group.generators.push_back(((r % n) + n) % n + 1);
  std::sort(group.generators.begin(), group.generators.end());
  group.generators.erase(std::unique(group.generators.begin(), group.generators.end()),
                         group.generators.end());
  return group;
}

// Direct product; element (a,b) is numbered (a-1)*|B| + b. Generators are the
// images of each factor's generators.
inline CayleyGroup direct_product(const CayleyGroup& a, const CayleyGroup& b) {
  const int na = a.order();
  const int nb = b.order();
  auto id = [nb](int x, int y) { return (x - 1) * nb + y; };
  CayleyGroup group;
  group.table.assign(na * nb, std::vector<int>(na * nb));
  for (int x1 = 1; x1 <= na; ++x1) {
    for (int y1 = 1; y1 <= nb; ++y1) {
      for (int x2 = 1; x2 <= na; ++x2) {
        for (int y2 = 1; y2 <= nb; ++y2) {
          group.table[id(x1, y1) - 1][id(x2, y2) - 1] =
              id(a.multiply(x1, x2), b.multiply(y1, y2));
        }
      }
    }
  }
  for (int s : a.generators) group.generators.push_back(id(s, 1));
  for (int s : b.generators) group.generators.push_back(id(1, s));
  std::sort(group.generators.begin(), group.generators.end());
  return group;
}

inline Graph cayley_graph(const CayleyGroup& group) {
  group.validate();
  std::vector<Edge> edges;
  for (int g = 1; g <= group.order(); ++g) {
    for (int s : group.generators) {
      int h = group.multiply(g, s);
      edges.emplace_back(std::min(g, h), std::max(g, h));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  try {
    return Graph(group.order(), std::move(edges));
  } catch (const ConstructionError&) {
    throw ConstructionError("generators do not generate the group (Cayley graph disconnected)");
  }
}

enum class GraphKind { hypercube, grid, clique, ring, barbell, cayley, random_regular };

inline std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::hypercube: return "hypercube";
    case GraphKind::grid: return "grid";
    case GraphKind::clique: return "clique";
    case GraphKind::ring: return "ring";
    case GraphKind::barbell: return "barbell";
    case GraphKind::cayley: return "cayley";
    case GraphKind::random_regular: return "random_regular";
  }
  return "unknown";
}

inline GraphKind parse_graph_kind(const std::string& name) {
  static const std::map<std::string, GraphKind> kinds = {
      {"hypercube", GraphKind::hypercube}, {"grid", GraphKind::grid},
      {"clique", GraphKind::clique},       {"ring", GraphKind::ring},
      {"barbell", GraphKind::barbell},     {"cayley", GraphKind::cayley},
      {"random_regular", GraphKind::random_regular}};
  auto it = kinds.find(name);
  if (it == kinds.end()) throw ArgumentError("unknown graph kind '" + name + "'");
  return it->second;
}

struct GraphSpec {
  GraphKind kind = GraphKind::clique;
  int dim = 0;
  int side = 0;
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;
  CayleyGroup group;
};

namespace detail {

inline Graph build_random_regular(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1 || d >= n) {
    throw ArgumentError("random_regular needs 1 <= d < n");
  }
  if ((static_cast<long long>(n) * d) % 2 != 0) {
    throw ArgumentError("random_regular needs n*d even");
  }
  Rng rng(seed);
  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<Vertex> points;
    points.reserve(static_cast<std::size_t>(n) * d);
    for (Vertex v = 1; v <= n; ++v) {
      for (int k = 0; k < d; ++k) points.push_back(v);
    }
    for (std::size_t i = points.size(); i > 1; --i) {
      std::swap(points[i - 1], points[rng.below(i)]);
    }
    std::vector<Edge> edges;
    bool ok = true;
    for (std::size_t i = 0; i < points.size(); i += 2) {
      Vertex u = points[i];
      Vertex v = points[i + 1];
      if (u == v) {
        ok = false;
        break;
      }
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    if (!ok) continue;
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
    try {
      return Graph(n, std::move(edges));
    } catch (const ConstructionError&) {
      continue;
    }
  }
  throw ConstructionError("random_regular rejection sampling did not converge");
}

}  // namespace detail

inline Graph build_graph(const GraphSpec& spec) {
  std::vector<Edge> edges;
  switch (spec.kind) {
    case GraphKind::hypercube: {
      if (spec.dim < 0 || spec.dim > 24) throw ArgumentError("hypercube dim must be in [0, 24]");
      const int n = 1 << spec.dim;
      for (int label = 0; label < n; ++label) {
        for (int bit = 0; bit < spec.dim; ++bit) {
          int other = label ^ (1 << bit);
          if (label < other) edges.emplace_back(label + 1, other + 1);
        }
      }
      return Graph(n, std::move(edges));
    }
    case GraphKind::grid: {
      const int s = spec.side;
      if (s < 1) throw ArgumentError("grid side must be positive");
      auto id = [s](int r, int c) { return r * s + c + 1; };
      for (int r = 0; r < s; ++r) {
        for (int c = 0; c < s; ++c) {
          if (c + 1 < s) edges.emplace_back(id(r, c), id(r, c + 1));
          if (r + 1 < s) edges.emplace_back(id(r, c), id(r + 1, c));
        }
      }
      return Graph(s * s, std::move(edges));
    }
    case GraphKind::clique: {
      if (spec.n < 1) throw ArgumentError("clique needs n >= 1");
      for (Vertex u = 1; u <= spec.n; ++u) {
        for (Vertex v = u + 1; v <= spec.n; ++v) edges.emplace_back(u, v);
      }
      return Graph(spec.n, std::move(edges));
    }
    case GraphKind::ring: {
      if (spec.n < 3) throw ConstructionError("ring needs n >= 3");
      for (Vertex v = 1; v <= spec.n; ++v) edges.emplace_back(v, v % spec.n + 1);
      return Graph(spec.n, std::move(edges));
    }
    case GraphKind::barbell: {
      if (spec.n < 4 || spec.n % 2 != 0) throw ConstructionError("barbell needs even n >= 4");
      const int half = spec.n / 2;
      for (int offset : {0, half}) {
        for (Vertex u = 1; u <= half; ++u) {
          for (Vertex v = u + 1; v <= half; ++v) edges.emplace_back(offset + u, offset + v);
        }
      }
      edges.emplace_back(half, half + 1);
      return Graph(spec.n, std::move(edges));
    }
    case GraphKind::cayley:
      return cayley_graph(spec.group);
    case GraphKind::random_regular:
      return detail::build_random_regular(spec.n, spec.d, spec.seed);
  }
  throw ArgumentError("unsupported graph kind");
}

// Hop distances from src; entry v-1 holds dist(src, v).
inline VertexMap<int> bfs_distances(const Graph& g, Vertex src) {
  if (src < 1 || src > g.size()) throw ArgumentError("bfs source out of range");
  VertexMap<int> dist(g.size(), -1);
  std::deque<Vertex> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (Vertex w : g.neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

struct GraphMetrics {
  int max_degree = 0;
  int diameter = 0;
};

inline GraphMetrics graph_metrics(const Graph& g) {
  GraphMetrics m;
  m.max_degree = g.max_degree();
  for (Vertex s = 1; s <= g.size(); ++s) {
    auto dist = bfs_distances(g, s);
    for (int d : dist) m.diameter = std::max(m.diameter, d);
  }
  return m;
}

namespace detail {

inline std::vector<std::uint64_t> adjacency_masks(const Graph& g) {
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(g.size()), 0);
  for (const auto& [u, v] : g.edges()) {
    adj[u - 1] |= std::uint64_t{1} << (v - 1);
    adj[v - 1] |= std::uint64_t{1} << (u - 1);
  }
  return adj;
}

}  // namespace detail

// Exact edge expansion min |E(S, V\S)| / |S| over 0 < |S| <= n/2.
inline Rational edge_expansion_exact(const Graph& g,
                                     std::size_t cap = ExhaustiveCaps::from_env().expansion) {
  const int n = g.size();
  if (static_cast<std::size_t>(n) > cap || n > 62) {
    throw CapabilityError("edge_expansion_exact on n=" + std::to_string(n), cap);
  }
  if (n < 2) throw ArgumentError("edge expansion needs at least two vertices");
  const auto adj = detail::adjacency_masks(g);
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  bool have = false;
  std::int64_t best_cut = 0;
  std::int64_t best_size = 1;
  for (std::uint64_t s = 1; s <= full; ++s) {
    const int size = std::popcount(s);
    if (2 * size > n) continue;
    std::int64_t cut = 0;
    for (std::uint64_t rest = s; rest; rest &= rest - 1) {
      cut += std::popcount(adj[std::countr_zero(rest)] & ~s);
    }
    if (!have || cut * best_size < best_cut * size) {
      have = true;
      best_cut = cut;
      best_size = size;
    }
  }
  return Rational(best_cut, best_size);
}

// Exact separation number. The boundary of A is taken inside H, so
// delta(A) = N(A) cap (H minus A). Subsets H with no admissible A (only |H| = 1)
// contribute nothing to the outer maximum.
inline int separation_number_exact(const Graph& g,
                                   std::size_t cap = ExhaustiveCaps::from_env().separation) {
  const int n = g.size();
  if (static_cast<std::size_t>(n) > cap || n > 30) {
    throw CapabilityError("separation_number_exact on n=" + std::to_string(n), cap);
  }
  const auto adj = detail::adjacency_masks(g);
  const std::uint32_t count = std::uint32_t{1} << n;
  // reach[A] = N(A), built incrementally from the lowest set bit.
  std::vector<std::uint32_t> reach(count, 0);
  for (std::uint32_t a = 1; a < count; ++a) {
    reach[a] = reach[a & (a - 1)] | static_cast<std::uint32_t>(adj[std::countr_zero(a)]);
  }
  int best = 0;
  for (std::uint32_t h = 0; h < count; ++h) {
    const int size_h = std::popcount(h);
    int inner = std::numeric_limits<int>::max();
    // |H|/4 <= |A| <= 3|H|/4, compared in integers.
    for (std::uint32_t a = h;; a = (a - 1) & h) {
      const int size_a = std::popcount(a);
      if (4 * size_a >= size_h && 4 * size_a <= 3 * size_h) {
        inner = std::min(inner, std::popcount(reach[a] & h & ~a));
        if (inner <= best) break;
      }
      if (a == 0) break;
    }
    if (inner != std::numeric_limits<int>::max()) best = std::max(best, inner);
  }
  return best;
}

}  // namespace lsqlab
