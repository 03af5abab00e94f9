#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lsqlab/core.hpp"
#include "lsqlab/graph.hpp"

namespace lsqlab {

using VertexSequence = std::vector<Vertex>;

// All-pairs table of paths. Storage is one flat vertex buffer with row-major
// offsets over ordered pairs (u, v).
class PathSystem {
 public:
  PathSystem() = default;

  // table[(u-1)*n + (v-1)] holds P^{u,v}.
  static PathSystem from_table(int n, const std::vector<VertexSequence>& table) {
    if (static_cast<long long>(table.size()) != static_cast<long long>(n) * n) {
      throw ValidationError("path table must list all n^2 ordered pairs");
    }
    PathSystem ps;
    ps.n_ = n;
    ps.offsets_.reserve(table.size() + 1);
    ps.offsets_.push_back(0);
    for (const auto& path : table) {
      ps.flat_.insert(ps.flat_.end(), path.begin(), path.end());
      ps.offsets_.push_back(ps.flat_.size());
    }
    ps.check_endpoints();
    return ps;
  }

  // Fills the table pair by pair in (u, v) order; `make(u, v)` returns P^{u,v}.
  template <typename Make>
  static PathSystem generate(int n, Make make) {
    PathSystem ps;
    ps.n_ = n;
    ps.offsets_.reserve(static_cast<std::size_t>(n) * n + 1);
    ps.offsets_.push_back(0);
    for (Vertex u = 1; u <= n; ++u) {
      for (Vertex v = 1; v <= n; ++v) {
        VertexSequence path = make(u, v);
        ps.flat_.insert(ps.flat_.end(), path.begin(), path.end());
        ps.offsets_.push_back(ps.flat_.size());
      }
    }
    ps.check_endpoints();
    return ps;
  }

  int size() const { return n_; }

  std::span<const Vertex> path(Vertex u, Vertex v) const {
    const std::size_t k = index(u, v);
    return {flat_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
  }

  std::vector<VertexSequence> table() const {
    std::vector<VertexSequence> out;
    out.reserve(static_cast<std::size_t>(n_) * n_);
    for (Vertex u = 1; u <= n_; ++u) {
      for (Vertex v = 1; v <= n_; ++v) {
        auto p = path(u, v);
        out.emplace_back(p.begin(), p.end());
      }
    }
    return out;
  }

  // Copy with selected entries replaced.
  PathSystem with_paths(const std::vector<VertexSequence>& replacements) const {
    auto t = table();
    for (const auto& p : replacements) {
      if (p.empty()) throw ValidationError("replacement path is empty");
      t[index(p.front(), p.back())] = p;
    }
    return from_table(n_, t);
  }

  // Checks every path is simple and walks along graph edges.
  void validate(const Graph& g) const {
    if (g.size() != n_) throw ValidationError("path system and graph disagree on n");
    std::vector<int> stamp(static_cast<std::size_t>(n_) + 1, -1);
    int tick = 0;
    for (Vertex u = 1; u <= n_; ++u) {
      for (Vertex v = 1; v <= n_; ++v, ++tick) {
        auto p = path(u, v);
        for (std::size_t i = 0; i < p.size(); ++i) {
          if (stamp[p[i]] == tick) {
            throw ValidationError("path P^{" + std::to_string(u) + "," + std::to_string(v) +
                                  "} revisits vertex " + std::to_string(p[i]));
          }
          stamp[p[i]] = tick;
          if (i > 0 && !g.has_edge(p[i - 1], p[i])) {
            throw ValidationError("path P^{" + std::to_string(u) + "," + std::to_string(v) +
                                  "} uses non-edge {" + std::to_string(p[i - 1]) + "," +
                                  std::to_string(p[i]) + "}");
          }
        }
      }
    }
  }

  friend bool operator==(const PathSystem& a, const PathSystem& b) {
    return a.n_ == b.n_ && a.flat_ == b.flat_ && a.offsets_ == b.offsets_;
  }

 private:
  std::size_t index(Vertex u, Vertex v) const {
    if (u < 1 || u > n_ || v < 1 || v > n_) {
      throw ArgumentError("vertex pair (" + std::to_string(u) + "," + std::to_string(v) +
                          ") out of range");
    }
    return static_cast<std::size_t>(u - 1) * n_ + static_cast<std::size_t>(v - 1);
  }

  void check_endpoints() const {
    for (Vertex u = 1; u <= n_; ++u) {
      for (Vertex v = 1; v <= n_; ++v) {
        auto p = path(u, v);
        if (p.empty() || p.front() != u || p.back() != v) {
          throw ValidationError("path P^{" + std::to_string(u) + "," + std::to_string(v) +
                                "} has wrong endpoints");
        }
        for (Vertex w : p) {
          if (w < 1 || w > n_) throw ValidationError("path vertex out of range");
        }
        if (u == v && p.size() != 1) {
          throw ValidationError("P^{u,u} must be the single vertex (u)");
        }
      }
    }
  }

  int n_ = 0;
  std::vector<Vertex> flat_;
  std::vector<std::size_t> offsets_;
};

namespace detail {

// Backward reconstruction from v towards the BFS root, always stepping to the
// lowest-id neighbor one level closer.
inline VertexSequence bfs_path_from_tree(const Graph& g, const VertexMap<int>& dist, Vertex v) {
  VertexSequence reversed{v};
  Vertex cur = v;
  while (dist[cur] > 0) {
    for (Vertex w : g.neighbors(cur)) {
      if (dist[w] == dist[cur] - 1) {
        cur = w;
        break;
      }
    }
    reversed.push_back(cur);
  }
  return {reversed.rbegin(), reversed.rend()};
}

}  // namespace detail

inline PathSystem shortest_path_system(const Graph& g) {
  const int n = g.size();
  std::vector<VertexMap<int>> dist;
  dist.reserve(n);
  for (Vertex u = 1; u <= n; ++u) dist.push_back(bfs_distances(g, u));
  return PathSystem::generate(
      n, [&](Vertex u, Vertex v) { return detail::bfs_path_from_tree(g, dist[u - 1], v); });
}

// Dimension b with g equal to the hypercube on labels v-1, or -1.
inline int hypercube_dimension(const Graph& g) {
  const int n = g.size();
  if (n < 1 || (n & (n - 1)) != 0) return -1;
  const int b = std::countr_zero(static_cast<unsigned>(n));
  GraphSpec spec;
  spec.kind = GraphKind::hypercube;
  spec.dim = b;
  return build_graph(spec) == g ? b : -1;
}

// Bit-fixing paths: differing bits are toggled from the most significant down.
inline PathSystem hypercube_path_system(const Graph& g) {
  const int b = hypercube_dimension(g);
  if (b < 0) throw ValidationError("graph is not a hypercube with bit-labelled vertices");
  return PathSystem::generate(g.size(), [b](Vertex u, Vertex v) {
    int cur = u - 1;
    const int target = v - 1;
    VertexSequence path{u};
    for (int bit = b - 1; bit >= 0; --bit) {
      const int mask = 1 << bit;
      if ((cur ^ target) & mask) {
        cur ^= mask;
        path.push_back(cur + 1);
      }
    }
    return path;
  });
}

// Translates BFS paths out of the identity: P^{u,v} = u * P^{1, u^{-1} v}.
inline PathSystem cayley_path_system(const Graph& g, const CayleyGroup& group) {
  if (!(cayley_graph(group) == g)) {
    throw ValidationError("graph is not the Cayley graph of the supplied group and generators");
  }
  const int n = g.size();
  const auto dist = bfs_distances(g, 1);
  std::vector<VertexSequence> from_identity;
  from_identity.reserve(n);
  for (Vertex w = 1; w <= n; ++w) from_identity.push_back(detail::bfs_path_from_tree(g, dist, w));
  std::vector<int> inverse(n + 1);
  for (int a = 1; a <= n; ++a) inverse[a] = group.inverse(a);
  return PathSystem::generate(n, [&](Vertex u, Vertex v) {
    const int w = group.multiply(inverse[u], v);
    VertexSequence path;
    path.reserve(from_identity[w - 1].size());
    for (Vertex x : from_identity[w - 1]) path.push_back(group.multiply(u, x));
    return path;
  });
}

struct CongestionProfile {
  VertexMap<long long> per_vertex;
  std::map<Edge, long long> per_edge;
  long long max_vertex = 0;
  long long max_edge = 0;
};

// Exact membership counts with multiplicity. Rows of the pair table are split
// into contiguous blocks across `workers` threads; merging is a plain sum, so
// the result does not depend on the worker count.
inline CongestionProfile congestion(const PathSystem& ps, unsigned workers = 1) {
  const int n = ps.size();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  struct Partial {
    std::vector<long long> vertex;
    std::map<Edge, long long> edge;
  };
  std::vector<Partial> parts(workers);
  auto work = [&](unsigned w) {
    Partial& part = parts[w];
    part.vertex.assign(static_cast<std::size_t>(n), 0);
    const int begin = static_cast<int>(static_cast<long long>(n) * w / workers) + 1;
    const int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
    for (Vertex u = begin; u <= end; ++u) {
      for (Vertex v = 1; v <= n; ++v) {
        auto p = ps.path(u, v);
        for (std::size_t i = 0; i < p.size(); ++i) {
          ++part.vertex[p[i] - 1];
          if (i > 0) ++part.edge[{std::min(p[i - 1], p[i]), std::max(p[i - 1], p[i])}];
        }
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  CongestionProfile profile;
  profile.per_vertex = VertexMap<long long>(n, 0);
  for (const auto& part : parts) {
    for (Vertex v = 1; v <= n; ++v) profile.per_vertex[v] += part.vertex[v - 1];
    for (const auto& [e, c] : part.edge) profile.per_edge[e] += c;
  }
  for (long long c : profile.per_vertex) profile.max_vertex = std::max(profile.max_vertex, c);
  for (const auto& [e, c] : profile.per_edge) profile.max_edge = std::max(profile.max_edge, c);
  return profile;
}

// psi_v(u) = number of paths P^{u,w} that contain v.
inline VertexMap<long long> num_paths_through(const PathSystem& ps, Vertex v) {
  const int n = ps.size();
  VertexMap<long long> psi(n, 0);
  for (Vertex u = 1; u <= n; ++u) {
    for (Vertex w = 1; w <= n; ++w) {
      auto p = ps.path(u, w);
      if (std::find(p.begin(), p.end(), v) != p.end()) ++psi[u];
    }
  }
  return psi;
}

struct OptimalCongestion {
  long long g_star = 0;
  PathSystem paths;
};

namespace detail {

inline void enumerate_simple_paths(const Graph& g, Vertex target, VertexSequence& current,
                                   std::vector<bool>& used, std::vector<VertexSequence>& out,
                                   std::size_t limit) {
  const Vertex last = current.back();
  if (last == target) {
    out.push_back(current);
    if (out.size() > limit) throw CapabilityError("too many simple paths for one vertex pair", limit);
    return;
  }
  for (Vertex w : g.neighbors(last)) {
    if (used[w]) continue;
    used[w] = true;
    current.push_back(w);
    enumerate_simple_paths(g, target, current, used, out, limit);
    current.pop_back();
    used[w] = false;
  }
}

}  // namespace detail

// Branch and bound over per-pair simple-path choices for the minimum vertex
// congestion. Only interior vertex sets matter for the load, so options are
// deduplicated by interior set, and the two directions of an unordered pair
// draw from the same option list with choice indices i <= j.
inline OptimalCongestion min_congestion_oracle(
    const Graph& g, std::size_t cap = ExhaustiveCaps::from_env().congestion_oracle,
    std::size_t per_pair_limit = 5000) {
  const int n = g.size();
  if (static_cast<std::size_t>(n) > cap) {
    throw CapabilityError("min_congestion_oracle on n=" + std::to_string(n), cap);
  }
  struct Pair {
    Vertex u, v;
    std::vector<VertexSequence> options;
    std::vector<std::vector<Vertex>> interiors;
  };
  std::vector<Pair> pairs;
  // Every vertex lies on its own path and is an endpoint of 2(n-1) others.
  const long long floor = 2LL * n - 1;
  std::vector<long long> base(static_cast<std::size_t>(n) + 1, n > 0 ? floor : 0);
  for (Vertex u = 1; u <= n; ++u) {
    for (Vertex v = u + 1; v <= n; ++v) {
      std::vector<VertexSequence> all;
      VertexSequence current{u};
      std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
      used[u] = true;
      detail::enumerate_simple_paths(g, v, current, used, all, per_pair_limit);
      std::sort(all.begin(), all.end(), [](const VertexSequence& a, const VertexSequence& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
      });
      // A path whose interior contains another option's interior never
      // lowers any load, so only inclusion-minimal interiors are kept.
      Pair pair{u, v, {}, {}};
      for (auto& path : all) {
        std::vector<Vertex> interior(path.begin() + 1, path.end() - 1);
        std::sort(interior.begin(), interior.end());
        const bool dominated = std::any_of(pair.interiors.begin(), pair.interiors.end(), [&](const auto& kept) {
          return std::includes(interior.begin(), interior.end(), kept.begin(), kept.end());
        });
        if (dominated) continue;
        pair.interiors.push_back(std::move(interior));
        pair.options.push_back(std::move(path));
      }
      pairs.push_back(std::move(pair));
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return a.options.size() < b.options.size();
  });
  const std::size_t count = pairs.size();

  auto to_table = [&](const std::vector<std::pair<std::size_t, std::size_t>>& pick) {
    std::vector<VertexSequence> table(static_cast<std::size_t>(n) * n);
    for (Vertex u = 1; u <= n; ++u) table[(u - 1) * n + (u - 1)] = {u};
    for (std::size_t k = 0; k < count; ++k) {
      const Pair& pr = pairs[k];
      table[(pr.u - 1) * n + (pr.v - 1)] = pr.options[pick[k].first];
      VertexSequence back = pr.options[pick[k].second];
      std::reverse(back.begin(), back.end());
      table[(pr.v - 1) * n + (pr.u - 1)] = std::move(back);
    }
    return PathSystem::from_table(n, table);
  };

  const PathSystem initial = shortest_path_system(g);
  OptimalCongestion best{congestion(initial).max_vertex, initial};
  if (best.g_star == floor) return best;

  std::vector<long long> load = base;
  auto add = [&](const std::vector<Vertex>& interior, long long delta) {
    long long worst = 0;
    for (Vertex w : interior) worst = std::max(worst, load[w] += delta);
    return worst;
  };

  // Greedy incumbent: each direction takes the option whose busiest interior
  // vertex is least loaded, ties broken by total interior load.
  {
    std::vector<std::pair<std::size_t, std::size_t>> pick(count);
    long long worst = floor;
    for (std::size_t k = 0; k < count; ++k) {
      for (int side = 0; side < 2; ++side) {
        std::size_t chosen = 0;
        std::pair<long long, long long> score{std::numeric_limits<long long>::max(), 0};
        for (std::size_t o = 0; o < pairs[k].interiors.size(); ++o) {
          long long peak = 0, sum = 0;
          for (Vertex w : pairs[k].interiors[o]) {
            peak = std::max(peak, load[w] + 1);
            sum += load[w] + 1;
          }
          if (std::make_pair(peak, sum) < score) {
            score = {peak, sum};
            chosen = o;
          }
        }
        (side == 0 ? pick[k].first : pick[k].second) = chosen;
        worst = std::max(worst, add(pairs[k].interiors[chosen], 1));
      }
    }
    for (std::size_t k = 0; k < count; ++k) {
      add(pairs[k].interiors[pick[k].first], -1);
      add(pairs[k].interiors[pick[k].second], -1);
    }
    if (worst < best.g_star) best = {worst, to_table(pick)};
    if (best.g_star == floor) return best;
  }

  // Depth-first search against the incumbent. At each node, options that
  // would push a vertex past g_star - 1 are dropped, where every undecided
  // pair whose surviving options all cross a vertex counts twice toward it.
  // Dropping repeats to a fixpoint, then the pair with fewest options branches.
  using Options = std::vector<std::vector<std::size_t>>;
  Options initial_options(count);
  for (std::size_t k = 0; k < count; ++k) {
    initial_options[k].resize(pairs[k].interiors.size());
    std::iota(initial_options[k].begin(), initial_options[k].end(), std::size_t{0});
  }
  std::vector<bool> decided(count, false);
  std::vector<std::pair<std::size_t, std::size_t>> choice(count);
  std::vector<std::pair<std::size_t, std::size_t>> best_choice;
  std::vector<long long> forced(static_cast<std::size_t>(n) + 1);
  std::vector<std::size_t> hits(static_cast<std::size_t>(n) + 1);

  auto propagate = [&](Options& feasible) {
    const long long limit = best.g_star - 1;
    for (bool changed = true; changed;) {
      changed = false;
      std::fill(forced.begin(), forced.end(), 0);
      long long total = 0;
      for (Vertex v = 1; v <= n; ++v) total += load[v];
      for (std::size_t k = 0; k < count; ++k) {
        if (decided[k]) continue;
        std::fill(hits.begin(), hits.end(), 0);
        std::size_t shortest = std::numeric_limits<std::size_t>::max();
        for (std::size_t o : feasible[k]) {
          for (Vertex w : pairs[k].interiors[o]) ++hits[w];
          shortest = std::min(shortest, pairs[k].interiors[o].size());
        }
        total += 2 * static_cast<long long>(shortest);
        for (Vertex v = 1; v <= n; ++v) {
          if (hits[v] == feasible[k].size()) forced[v] += 2;
        }
      }
      if (total > limit * n) return false;
      for (Vertex v = 1; v <= n; ++v) {
        if (load[v] + forced[v] > limit) return false;
      }
      for (std::size_t k = 0; k < count; ++k) {
        if (decided[k]) continue;
        std::fill(hits.begin(), hits.end(), 0);
        for (std::size_t o : feasible[k]) {
          for (Vertex w : pairs[k].interiors[o]) ++hits[w];
        }
        auto& list = feasible[k];
        const std::size_t before = list.size();
        list.erase(std::remove_if(list.begin(), list.end(),
                                  [&](std::size_t o) {
                                    for (Vertex w : pairs[k].interiors[o]) {
                                      // Unforced vertices gain one from this direction.
                                      if (hits[w] != before && load[w] + forced[w] + 1 > limit) return true;
                                    }
                                    return false;
                                  }),
                   list.end());
        if (list.empty()) return false;
        changed = changed || list.size() != before;
      }
    }
    return true;
  };

  auto search = [&](auto&& self, Options feasible, std::size_t remaining) -> bool {
    if (remaining == 0) {
      long long peak = 0;
      for (Vertex v = 1; v <= n; ++v) peak = std::max(peak, load[v]);
      best.g_star = peak;
      best_choice = choice;
      return peak == floor;
    }
    if (!propagate(feasible)) return false;
    std::size_t k = count;
    for (std::size_t c = 0; c < count; ++c) {
      if (!decided[c] && (k == count || feasible[c].size() < feasible[k].size())) k = c;
    }
    decided[k] = true;
    const auto& list = feasible[k];
    const auto& interiors = pairs[k].interiors;
    bool done = false;
    for (std::size_t ia = 0; ia < list.size() && !done; ++ia) {
      const long long after_a = add(interiors[list[ia]], 1);
      for (std::size_t ib = ia; ib < list.size() && !done && after_a < best.g_star; ++ib) {
        const long long after_b = add(interiors[list[ib]], 1);
        if (after_b < best.g_star) {
          choice[k] = {list[ia], list[ib]};
          done = self(self, feasible, remaining - 1);
        }
        add(interiors[list[ib]], -1);
      }
      add(interiors[list[ia]], -1);
    }
    decided[k] = false;
    return done;
  };
  search(search, initial_options, count);

  if (!best_choice.empty()) best.paths = to_table(best_choice);
  return best;
}

}  // namespace lsqlab
