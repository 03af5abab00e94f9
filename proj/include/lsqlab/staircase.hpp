#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lsqlab/core.hpp"
#include "lsqlab/graph.hpp"
#include "lsqlab/path_system.hpp"
#include "lsqlab/random.hpp"

namespace lsqlab {

class MilestoneSequence {
 public:
  MilestoneSequence() : milestones_{1} {}
  explicit MilestoneSequence(std::vector<Vertex> milestones) : milestones_(std::move(milestones)) {
    if (milestones_.empty()) throw ArgumentError("milestone sequence is empty");
    if (milestones_.front() != 1) throw ArgumentError("milestone sequence must start at vertex 1");
  }

  int quasi_segments() const { return static_cast<int>(milestones_.size()) - 1; }
  // 1-based access, x_1 .. x_{L+1}.
  Vertex at(int i) const { return milestones_[static_cast<std::size_t>(i - 1)]; }
  const std::vector<Vertex>& values() const { return milestones_; }

  void check_range(int n) const {
    for (Vertex x : milestones_) {
      if (x < 1 || x > n) throw ArgumentError("milestone " + std::to_string(x) + " outside [1," +
                                              std::to_string(n) + "]");
    }
  }

  friend bool operator==(const MilestoneSequence&, const MilestoneSequence&) = default;

 private:
  std::vector<Vertex> milestones_;
};

struct Staircase {
  VertexSequence walk;
  // segment_bounds[i-1] is the walk index where quasi-segment i starts.
  std::vector<std::size_t> segment_bounds;

  Vertex last() const { return walk.back(); }
};

inline Staircase build_staircase(const MilestoneSequence& x, const PathSystem& ps) {
  x.check_range(ps.size());
  Staircase s;
  s.walk.push_back(x.at(1));
  for (int i = 1; i <= x.quasi_segments(); ++i) {
    s.segment_bounds.push_back(s.walk.size() - 1);
    auto p = ps.path(x.at(i), x.at(i + 1));
    s.walk.insert(s.walk.end(), p.begin() + 1, p.end());
  }
  return s;
}

using ValueFunction = VertexMap<std::int64_t>;

// A pair (value, flag) returned by a hidden-bit oracle.
using Reading = std::pair<std::int64_t, int>;

struct HiddenBitFunction {
  ValueFunction base;
  VertexMap<int> flag;
  int hidden_bit = 0;

  Reading operator()(Vertex v) const { return {base[v], flag[v]}; }
  int size() const { return base.size(); }
};

inline ValueFunction value_function(const MilestoneSequence& x, const PathSystem& ps,
                                    const Graph& g, const VertexMap<int>& entrance_dist) {
  const int n = g.size();
  if (ps.size() != n) throw ArgumentError("path system and graph disagree on n");
  if (x.quasi_segments() < 1) throw ArgumentError("value function needs L >= 1");
  x.check_range(n);
  ValueFunction f(n, 0);
  std::vector<bool> assigned(static_cast<std::size_t>(n) + 1, false);
  for (int i = x.quasi_segments(); i >= 1; --i) {
    auto p = ps.path(x.at(i), x.at(i + 1));
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (!assigned[p[j]]) {
        assigned[p[j]] = true;
        f[p[j]] = -static_cast<std::int64_t>(i) * n - static_cast<std::int64_t>(j + 1);
      }
    }
  }
  for (Vertex v = 1; v <= n; ++v) {
    if (!assigned[v]) f[v] = entrance_dist[v];
  }
  return f;
}

inline ValueFunction value_function(const MilestoneSequence& x, const PathSystem& ps,
                                    const Graph& g) {
  return value_function(x, ps, g, bfs_distances(g, 1));
}

inline HiddenBitFunction hide_bit(const ValueFunction& f, const Staircase& s, int b) {
  if (b != 0 && b != 1) throw ArgumentError("hidden bit must be 0 or 1");
  HiddenBitFunction h{f, VertexMap<int>(f.size(), -1), b};
  h.flag[s.last()] = b;
  return h;
}

template <typename Sequence>
bool all_distinct(const Sequence& xs) {
  std::vector<int> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

inline bool is_good(const MilestoneSequence& x) { return all_distinct(x.values()); }

inline int multiplicity(std::span<const Vertex> q, Vertex u) {
  return static_cast<int>(std::count(q.begin(), q.end(), u));
}

// Suffix S_{x,j} o ... o S_{x,L} with the first occurrence of x_j removed.
inline VertexSequence tail(int j, const Staircase& s) {
  const int segments = static_cast<int>(s.segment_bounds.size());
  if (j < 1 || j > segments + 1) {
    throw ArgumentError("tail index " + std::to_string(j) + " outside [1," +
                        std::to_string(segments + 1) + "]");
  }
  if (j == segments + 1) return {};
  return VertexSequence(s.walk.begin() + static_cast<std::ptrdiff_t>(s.segment_bounds[j - 1]) + 1,
                        s.walk.end());
}

// Largest j with x_{1..j} = y_{1..j}.
inline int agreeing_prefix(const std::vector<Vertex>& x, const std::vector<Vertex>& y) {
  const std::size_t limit = std::min(x.size(), y.size());
  std::size_t j = 0;
  while (j < limit && x[j] == y[j]) ++j;
  return static_cast<int>(j);
}

inline BigNat relation_congestion(const MilestoneSequence& x, int b1, const MilestoneSequence& y,
                                  int b2, int n) {
  if (x.quasi_segments() != y.quasi_segments()) {
    throw ArgumentError("relation needs sequences with equal L");
  }
  if (b1 == b2 || !is_good(x) || !is_good(y)) return 0;
  return big_pow(n, static_cast<unsigned>(agreeing_prefix(x.values(), y.values())));
}

// A member g_{x,b} of the staircase family together with its provenance.
struct StaircaseFunction {
  MilestoneSequence x;
  int bit = 0;
  Staircase stairs;
  HiddenBitFunction g;
};

inline StaircaseFunction make_staircase_function(const MilestoneSequence& x, int b,
                                                 const PathSystem& ps, const Graph& g,
                                                 const VertexMap<int>& entrance_dist) {
  Staircase s = build_staircase(x, ps);
  HiddenBitFunction h = hide_bit(value_function(x, ps, g, entrance_dist), s, b);
  return {x, b, std::move(s), std::move(h)};
}

inline StaircaseFunction make_staircase_function(const MilestoneSequence& x, int b,
                                                 const PathSystem& ps, const Graph& g) {
  return make_staircase_function(x, b, ps, g, bfs_distances(g, 1));
}

struct DistinguishingWeights {
  BigNat r;
  BigNat r_v;
  BigNat r_tilde_v;
};

inline DistinguishingWeights distinguishing_weights(Vertex v, const StaircaseFunction& f1,
                                                    const StaircaseFunction& f2) {
  DistinguishingWeights w;
  w.r = relation_congestion(f1.x, f1.bit, f2.x, f2.bit, f1.g.size());
  if (w.r != 0 && f1.g(v) != f2.g(v)) {
    w.r_v = w.r;
    if (multiplicity(f1.stairs.walk, v) <= multiplicity(f2.stairs.walk, v)) w.r_tilde_v = w.r;
  }
  return w;
}

// Returns a description of the first violated validity condition, if any.
inline std::optional<std::string> check_valid(const Graph& g, const ValueFunction& f,
                                              const VertexSequence& walk) {
  const int n = g.size();
  if (walk.empty()) return "walk is empty";
  std::vector<int> last_position(static_cast<std::size_t>(n) + 1, -1);
  for (std::size_t i = 0; i < walk.size(); ++i) last_position[walk[i]] = static_cast<int>(i);
  std::vector<Vertex> order;
  for (Vertex v = 1; v <= n; ++v) {
    if (last_position[v] >= 0) order.push_back(v);
  }
  std::sort(order.begin(), order.end(),
            [&](Vertex a, Vertex b) { return last_position[a] < last_position[b]; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (!(f[order[k - 1]] > f[order[k]])) {
      return "values do not strictly decrease by last occurrence: f(" +
             std::to_string(order[k - 1]) + ")=" + std::to_string(f[order[k - 1]]) + ", f(" +
             std::to_string(order[k]) + ")=" + std::to_string(f[order[k]]);
    }
  }
  const auto dist = bfs_distances(g, walk.front());
  for (Vertex v = 1; v <= n; ++v) {
    if (last_position[v] >= 0) {
      if (f[v] > 0) return "on-walk vertex " + std::to_string(v) + " has positive value";
    } else if (f[v] != dist[v] || f[v] <= 0) {
      return "off-walk vertex " + std::to_string(v) + " has value " + std::to_string(f[v]) +
             " but distance " + std::to_string(dist[v]);
    }
  }
  return std::nullopt;
}

inline bool validate_function(const Graph& g, const ValueFunction& f, const VertexSequence& walk) {
  return !check_valid(g, f, walk).has_value();
}

inline std::vector<Vertex> local_minima(const Graph& g, const ValueFunction& f) {
  std::vector<Vertex> minima;
  for (Vertex v = 1; v <= g.size(); ++v) {
    bool minimal = true;
    for (Vertex u : g.neighbors(v)) {
      if (f[u] < f[v]) {
        minimal = false;
        break;
      }
    }
    if (minimal) minima.push_back(v);
  }
  return minima;
}

struct HardInstance {
  MilestoneSequence x;
  int bit = 0;
  Staircase stairs;
  HiddenBitFunction g;
};

// x_1 = 1, then L distinct milestones drawn uniformly without replacement from
// [n] \ {1} by a partial Fisher-Yates shuffle, then one uniform bit.
inline HardInstance sample_hard_instance(const Graph& g, const PathSystem& ps, int L,
                                         std::uint64_t seed) {
  const int n = g.size();
  if (L < 1 || L + 1 > n) {
    throw ArgumentError("sample_hard_instance needs 1 <= L <= n-1 (got L=" + std::to_string(L) +
                        ", n=" + std::to_string(n) + ")");
  }
  Rng rng(seed);
  std::vector<Vertex> pool(static_cast<std::size_t>(n - 1));
  std::iota(pool.begin(), pool.end(), 2);
  std::vector<Vertex> xs{1};
  for (int i = 0; i < L; ++i) {
    const std::size_t remaining = pool.size() - static_cast<std::size_t>(i);
    const std::size_t pick = static_cast<std::size_t>(i) + rng.below(remaining);
    std::swap(pool[static_cast<std::size_t>(i)], pool[pick]);
    xs.push_back(pool[static_cast<std::size_t>(i)]);
  }
  const int b = rng.bit();
  MilestoneSequence x(std::move(xs));
  auto f = make_staircase_function(x, b, ps, g);
  return {std::move(f.x), b, std::move(f.stairs), std::move(f.g)};
}

}  // namespace lsqlab
