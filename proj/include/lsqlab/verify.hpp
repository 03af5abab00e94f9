#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lsqlab/adversary.hpp"
#include "lsqlab/bench.hpp"
#include "lsqlab/core.hpp"
#include "lsqlab/graph.hpp"
#include "lsqlab/io.hpp"
#include "lsqlab/path_system.hpp"
#include "lsqlab/random.hpp"
#include "lsqlab/separation.hpp"
#include "lsqlab/solvers.hpp"
#include "lsqlab/staircase.hpp"

namespace lsqlab {

struct CheckResult {
  CheckResult(std::string module_name, std::string check_name)
      : module(std::move(module_name)), name(std::move(check_name)) {}

  std::string module;
  std::string name;
  bool passed = true;
  long long cases = 0;
  std::string detail;

  void fail(const std::string& counterexample) {
    if (passed) detail = counterexample;
    passed = false;
  }
};

enum class Fault { none, flip_on_walk_sign };

struct VerifyOptions {
  // Random instances per sampled family.
  int random_instances = 1000;
  // Sampled subsets for the lemma suites beyond the exhaustive range.
  int sampled_subsets = 1000;
  std::uint64_t seed = 20240607;
  Fault fault = Fault::none;
};

namespace checks {

inline Graph make(GraphKind kind, int size, int d = 0, std::uint64_t seed = 0) {
  GraphSpec spec;
  spec.kind = kind;
  spec.n = size;
  spec.dim = size;
  spec.side = size;
  spec.d = d;
  spec.seed = seed;
  return build_graph(spec);
}

inline Graph path_graph(int n) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.emplace_back(v, v + 1);
  return Graph(n, edges);
}

inline Graph star_graph(int leaves) {
  std::vector<Edge> edges;
  for (Vertex v = 2; v <= leaves + 1; ++v) edges.emplace_back(1, v);
  return Graph(leaves + 1, edges);
}

inline std::string seq(const std::vector<int>& xs) {
  std::string s = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s + ")";
}

inline std::vector<Vertex> random_permutation(int n, Rng& rng) {
  std::vector<Vertex> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  return perm;
}

// Calls visit(xs) for every xs in {1} x [n]^L in lexicographic order.
inline void for_each_sequence(int n, int L, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> xs(static_cast<std::size_t>(L) + 1, 1);
  while (true) {
    visit(xs);
    int pos = L;
    while (pos >= 1 && xs[pos] == n) xs[pos--] = 1;
    if (pos < 1) return;
    ++xs[pos];
  }
}

// (n-j-1) * prod_{i=j+2}^{top} (n-i+1).
inline BigNat divergent_count(int n, int j, int top) {
  BigNat count = n - j - 1;
  for (int i = j + 2; i <= top; ++i) count *= (n - i + 1);
  return count;
}

// Rational lower bound on e, so M * 2 * kELower >= X certifies M >= X / (2e).
inline Rational e_lower() { return Rational(BigNat("271828182845904523"), BigNat("100000000000000000")); }

struct NamedGraph {
  std::string name;
  Graph graph;
};

inline std::vector<NamedGraph> lemma_graphs(int n) {
  return {{"K" + std::to_string(n), make(GraphKind::clique, n)},
          {"C" + std::to_string(n), make(GraphKind::ring, n)},
          {"P" + std::to_string(n), path_graph(n)}};
}

// ---------------------------------------------------------------- graph

inline CheckResult graph_determinism(const VerifyOptions&) {
  CheckResult res{"graph", "build_graph deterministic"};
  for (std::uint64_t seed : {1ULL, 7ULL, 99ULL}) {
    Graph a = make(GraphKind::random_regular, 12, 3, seed);
    Graph b = make(GraphKind::random_regular, 12, 3, seed);
    ++res.cases;
    if (!(a == b) || dump(to_json(a)) != dump(to_json(b))) {
      res.fail("random_regular(12,3,seed=" + std::to_string(seed) + ") differs between runs");
    }
  }
  return res;
}

inline std::vector<NamedGraph> metric_graphs() {
  return {{"grid4", make(GraphKind::grid, 4)},       {"Q3", make(GraphKind::hypercube, 3)},
          {"barbell8", make(GraphKind::barbell, 8)}, {"C7", make(GraphKind::ring, 7)},
          {"K5", make(GraphKind::clique, 5)},        {"rr12", make(GraphKind::random_regular, 12, 3, 5)}};
}

inline CheckResult graph_distances(const VerifyOptions&) {
  CheckResult res{"graph", "distance triangle inequality and edge Lipschitz"};
  for (const auto& [name, g] : metric_graphs()) {
    std::vector<VertexMap<int>> d;
    for (Vertex s = 1; s <= g.size(); ++s) d.push_back(bfs_distances(g, s));
    for (Vertex u = 1; u <= g.size(); ++u) {
      if (d[u - 1][u] != 0) res.fail(name + ": dist(u,u) != 0");
      for (Vertex v = 1; v <= g.size(); ++v) {
        for (Vertex w = 1; w <= g.size(); ++w) {
          ++res.cases;
          if (d[u - 1][w] > d[u - 1][v] + d[v - 1][w]) {
            res.fail(name + ": triangle inequality fails at " + seq({u, v, w}));
          }
        }
      }
    }
    for (const auto& [u, v] : g.edges()) {
      for (Vertex x = 1; x <= g.size(); ++x) {
        if (std::abs(d[u - 1][x] - d[v - 1][x]) > 1) res.fail(name + ": edge Lipschitz fails");
      }
    }
  }
  return res;
}

inline CheckResult graph_expansion(const VerifyOptions& opt) {
  CheckResult res{"graph", "expansion positive and relabeling invariant"};
  Rng rng(opt.seed);
  for (const auto& [name, g] : metric_graphs()) {
    const Rational beta = edge_expansion_exact(g);
    const Rational shuffled = edge_expansion_exact(g.relabeled(random_permutation(g.size(), rng)));
    ++res.cases;
    if (beta <= 0) res.fail(name + ": expansion not positive");
    if (beta != shuffled) res.fail(name + ": expansion changes under relabeling");
  }
  return res;
}

inline CheckResult graph_separation_relabel(const VerifyOptions& opt) {
  CheckResult res{"graph", "separation number relabeling invariant"};
  Rng rng(opt.seed + 1);
  const std::vector<NamedGraph> graphs = {{"barbell8", make(GraphKind::barbell, 8)},
                                          {"C8", make(GraphKind::ring, 8)},
                                          {"rr10", make(GraphKind::random_regular, 10, 3, 3)}};
  for (const auto& [name, g] : graphs) {
    const int s = separation_number_exact(g);
    for (int k = 0; k < 20; ++k) {
      ++res.cases;
      const int t = separation_number_exact(g.relabeled(random_permutation(g.size(), rng)));
      if (s != t) res.fail(name + ": s=" + std::to_string(s) + " but relabeled s=" + std::to_string(t));
    }
  }
  return res;
}

// ---------------------------------------------------------------- paths

inline CheckResult paths_congestion_range(const VerifyOptions&) {
  CheckResult res{"paths", "n <= g <= n^2"};
  std::vector<std::pair<std::string, PathSystem>> systems;
  for (int n = 2; n <= 8; ++n) {
    systems.emplace_back("K" + std::to_string(n) + "/bfs", shortest_path_system(make(GraphKind::clique, n)));
    systems.emplace_back("P" + std::to_string(n) + "/bfs", shortest_path_system(path_graph(n)));
    if (n >= 3) {
      Graph ring = make(GraphKind::ring, n);
      systems.emplace_back("C" + std::to_string(n) + "/bfs", shortest_path_system(ring));
      systems.emplace_back("C" + std::to_string(n) + "/cayley",
                           cayley_path_system(ring, cyclic_group(n, {1, n - 1})));
    }
  }
  for (int b = 1; b <= 3; ++b) {
    systems.emplace_back("Q" + std::to_string(b) + "/bitfix", hypercube_path_system(make(GraphKind::hypercube, b)));
  }
  systems.emplace_back("grid2/bfs", shortest_path_system(make(GraphKind::grid, 2)));
  systems.emplace_back("star3/bfs", shortest_path_system(star_graph(3)));
  for (const auto& [name, ps] : systems) {
    ++res.cases;
    const long long n = ps.size();
    const long long g = congestion(ps).max_vertex;
    if (g < n || g > n * n) res.fail(name + ": g=" + std::to_string(g) + " outside [n, n^2]");
  }
  return res;
}

inline CheckResult paths_oracle_dominance(const VerifyOptions&) {
  CheckResult res{"paths", "shortest-path congestion >= brute-force optimum"};
  const std::vector<NamedGraph> graphs = {{"P3", path_graph(3)},
                                          {"K4", make(GraphKind::clique, 4)},
                                          {"C4", make(GraphKind::ring, 4)},
                                          {"C5", make(GraphKind::ring, 5)},
                                          {"star3", star_graph(3)},
                                          {"grid2", make(GraphKind::grid, 2)}};
  for (const auto& [name, g] : graphs) {
    ++res.cases;
    const auto opt = min_congestion_oracle(g);
    opt.paths.validate(g);
    const long long bfs = congestion(shortest_path_system(g)).max_vertex;
    if (congestion(opt.paths).max_vertex != opt.g_star) res.fail(name + ": oracle system does not attain g*");
    if (bfs < opt.g_star) res.fail(name + ": shortest-path system beats the oracle");
  }
  return res;
}

inline CheckResult paths_cayley_uniform(const VerifyOptions&) {
  CheckResult res{"paths", "Cayley congestion uniform and <= (diameter+1) n"};
  const std::vector<std::pair<std::string, CayleyGroup>> groups = {
      {"Z5{1,4}", cyclic_group(5, {1, 4})},
      {"Z6{1,5}", cyclic_group(6, {1, 5})},
      {"Z4{1,3}", cyclic_group(4, {1, 3})},
      {"Z2{1}", cyclic_group(2, {1})},
      {"Z2xZ2", direct_product(cyclic_group(2, {1}), cyclic_group(2, {1}))}};
  for (const auto& [name, group] : groups) {
    ++res.cases;
    const Graph g = cayley_graph(group);
    const PathSystem ps = cayley_path_system(g, group);
    ps.validate(g);
    const auto profile = congestion(ps);
    const long long first = profile.per_vertex[1];
    for (long long c : profile.per_vertex) {
      if (c != first) res.fail(name + ": per-vertex congestion not uniform");
    }
    const long long bound = static_cast<long long>(graph_metrics(g).diameter + 1) * g.size();
    if (profile.max_vertex > bound) res.fail(name + ": congestion exceeds (diameter+1) n");
  }
  return res;
}

inline CheckResult paths_hypercube_formula(const VerifyOptions&) {
  CheckResult res{"paths", "bit-fixing congestion = N (1 + b/2)"};
  for (int b = 1; b <= 4; ++b) {
    ++res.cases;
    const Graph g = make(GraphKind::hypercube, b);
    const PathSystem ps = hypercube_path_system(g);
    ps.validate(g);
    const long long N = g.size();
    const auto profile = congestion(ps);
    // N (1 + b/2) = N (2 + b) / 2
    const long long expected = N * (2 + b) / 2;
    for (long long c : profile.per_vertex) {
      if (c != expected) {
        res.fail("b=" + std::to_string(b) + ": vertex congestion " + std::to_string(c) + " != " +
                 std::to_string(expected));
        break;
      }
    }
  }
  return res;
}

inline CheckResult paths_roundtrip(const VerifyOptions&) {
  CheckResult res{"paths", "path system JSON round trip"};
  for (const auto& ps : {shortest_path_system(make(GraphKind::grid, 3)),
                         hypercube_path_system(make(GraphKind::hypercube, 3))}) {
    ++res.cases;
    const PathSystem back = path_system_from_json(Json::parse(dump(to_json(ps))));
    if (!(back == ps)) res.fail("round trip changed the path system");
  }
  return res;
}

// ---------------------------------------------------------------- staircase

inline ValueFunction apply_fault(ValueFunction f, const VertexSequence& walk, Fault fault) {
  if (fault == Fault::flip_on_walk_sign) {
    std::set<Vertex> on(walk.begin(), walk.end());
    for (Vertex v : on) f[v] = -f[v];
  }
  return f;
}

// Unique local minimum at the walk end plus validity, for one (x, ps).
inline void check_unique_minimum(CheckResult& res, const std::string& name, const Graph& g,
                                 const PathSystem& ps, const MilestoneSequence& x,
                                 const VertexMap<int>& dist, Fault fault) {
  ++res.cases;
  const Staircase s = build_staircase(x, ps);
  const ValueFunction f = apply_fault(value_function(x, ps, g, dist), s.walk, fault);
  const auto minima = local_minima(g, f);
  if (minima.size() != 1 || minima.front() != s.last()) {
    res.fail(name + " x=" + seq(x.values()) + ": local minima " + seq(minima) + ", walk end " +
             std::to_string(s.last()));
    return;
  }
  if (auto why = check_valid(g, f, s.walk)) res.fail(name + " x=" + seq(x.values()) + ": " + *why);
}

inline std::vector<NamedGraph> unique_minimum_graphs() {
  std::vector<NamedGraph> graphs;
  for (int n = 2; n <= 5; ++n) {
    graphs.push_back({"K" + std::to_string(n), make(GraphKind::clique, n)});
    if (n >= 3) graphs.push_back({"C" + std::to_string(n), make(GraphKind::ring, n)});
  }
  graphs.push_back({"grid2", make(GraphKind::grid, 2)});
  return graphs;
}

inline CheckResult staircase_unique_minimum_exhaustive(const VerifyOptions& opt) {
  CheckResult res{"staircase", "unique local minimum (exhaustive n <= 5, L <= 3)"};
  for (const auto& [name, g] : unique_minimum_graphs()) {
    const PathSystem ps = shortest_path_system(g);
    const auto dist = bfs_distances(g, 1);
    for (int L = 1; L <= 3; ++L) {
      for_each_sequence(g.size(), L, [&](const std::vector<int>& xs) {
        check_unique_minimum(res, name, g, ps, MilestoneSequence(xs), dist, opt.fault);
      });
    }
  }
  return res;
}

inline CheckResult staircase_unique_minimum_random(const VerifyOptions& opt) {
  CheckResult res{"staircase", "unique local minimum (random hypercube instances, dim <= 8)"};
  Rng rng(opt.seed + 2);
  std::vector<Graph> cubes;
  std::vector<PathSystem> systems;
  std::vector<VertexMap<int>> dists;
  for (int dim = 3; dim <= 8; ++dim) {
    cubes.push_back(make(GraphKind::hypercube, dim));
    systems.push_back(hypercube_path_system(cubes.back()));
    dists.push_back(bfs_distances(cubes.back(), 1));
  }
  for (int trial = 0; trial < opt.random_instances; ++trial) {
    const std::size_t k = rng.below(cubes.size());
    const Graph& g = cubes[k];
    const int L = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(default_staircase_length(g.size()))));
    std::vector<int> xs{1};
    for (int i = 0; i < L; ++i) xs.push_back(1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(g.size()))));
    check_unique_minimum(res, "Q" + std::to_string(k + 3), g, systems[k], MilestoneSequence(xs), dists[k], opt.fault);
  }
  return res;
}

inline BigNat m_single(int n, const std::vector<int>& x) {
  BigNat total = 0;
  const MilestoneSequence mx(x);
  for_each_sequence(n, static_cast<int>(x.size()) - 1, [&](const std::vector<int>& ys) {
    total += relation_congestion(mx, 0, MilestoneSequence(ys), 1, n);
  });
  return total;
}

inline CheckResult staircase_m_large(const VerifyOptions&) {
  CheckResult res{"staircase", "M({F}) >= (L+1) n^{L+1} / 2e, and M = 24 at n=4, L=1"};
  for (int n : {4, 5}) {
    for (int L : {1, 2}) {
      for_each_sequence(n, L, [&](const std::vector<int>& xs) {
        if (!all_distinct(xs)) return;
        ++res.cases;
        const BigNat m = m_single(n, xs);
        const BigNat target = (L + 1) * big_pow(n, static_cast<unsigned>(L + 1));
        if (Rational(m) * 2 * e_lower() < Rational(target)) {
          res.fail("n=" + std::to_string(n) + " x=" + seq(xs) + ": M=" + m.str());
        }
        if (n == 4 && L == 1 && m != 24) res.fail("n=4 x=" + seq(xs) + ": M=" + m.str() + " != 24");
      });
    }
  }
  return res;
}

inline CheckResult staircase_count_y(const VerifyOptions&) {
  CheckResult res{"staircase", "count of good y by agreeing prefix (n <= 6, L <= 3)"};
  for (int n = 2; n <= 6; ++n) {
    for (int L = 1; L <= 3 && L + 1 <= n; ++L) {
      std::vector<std::vector<int>> good;
      for_each_sequence(n, L, [&](const std::vector<int>& ys) {
        if (all_distinct(ys)) good.push_back(ys);
      });
      for (const auto& x : good) {
        std::vector<long long> counts(static_cast<std::size_t>(L) + 2, 0);
        for (const auto& y : good) ++counts[agreeing_prefix(x, y)];
        for (int j = 1; j <= L; ++j) {
          ++res.cases;
          if (BigNat(counts[j]) != divergent_count(n, j, L + 1)) {
            res.fail("n=" + std::to_string(n) + " x=" + seq(x) + " j=" + std::to_string(j) +
                     ": count " + std::to_string(counts[j]) + " != " + divergent_count(n, j, L + 1).str());
          }
        }
      }
    }
  }
  return res;
}

inline CheckResult staircase_tail_bound(const VerifyOptions&) {
  CheckResult res{"staircase", "tail membership count bound (n <= 5, L <= 2)"};
  for (int n = 3; n <= 5; ++n) {
    for (const auto& [name, g] : lemma_graphs(n)) {
      const PathSystem ps = shortest_path_system(g);
      const long long cong = congestion(ps).max_vertex;
      std::vector<VertexMap<long long>> psi;
      for (Vertex v = 1; v <= n; ++v) psi.push_back(num_paths_through(ps, v));
      for (int L = 1; L <= 2; ++L) {
        std::vector<std::vector<int>> all;
        std::vector<Staircase> stairs;
        for_each_sequence(n, L, [&](const std::vector<int>& ys) {
          all.push_back(ys);
          stairs.push_back(build_staircase(MilestoneSequence(ys), ps));
        });
        for (const auto& x : all) {
          for (int j = 1; j <= L; ++j) {
            for (Vertex v = 1; v <= n; ++v) {
              ++res.cases;
              long long count = 0;
              for (std::size_t k = 0; k < all.size(); ++k) {
                if (agreeing_prefix(x, all[k]) != j) continue;
                const auto t = tail(j, stairs[k]);
                if (std::find(t.begin(), t.end(), v) != t.end()) ++count;
              }
              // count <= psi n^{L-j} + L g n^{L-j-1}, scaled by n.
              const BigNat lhs = BigNat(count) * n;
              const BigNat rhs = BigNat(psi[v - 1][x[j - 1]]) * big_pow(n, static_cast<unsigned>(L - j + 1)) +
                                 BigNat(L) * cong * big_pow(n, static_cast<unsigned>(L - j));
              if (lhs > rhs) {
                res.fail(name + " L=" + std::to_string(L) + " x=" + seq(x) + " j=" + std::to_string(j) +
                         " v=" + std::to_string(v) + ": count " + std::to_string(count));
              }
            }
          }
        }
      }
    }
  }
  return res;
}

struct WeightTables {
  std::vector<StaircaseFunction> good;
  // r_v and r~_v per vertex, row-major over good-function pairs.
  std::vector<std::vector<BigNat>> rv, rtv;
  std::size_t size() const { return good.size(); }
};

inline WeightTables weight_tables(const Graph& g, const PathSystem& ps, int L) {
  WeightTables t;
  const int n = g.size();
  const auto dist = bfs_distances(g, 1);
  for_each_sequence(n, L, [&](const std::vector<int>& xs) {
    if (!all_distinct(xs)) return;
    for (int b = 0; b <= 1; ++b) t.good.push_back(make_staircase_function(MilestoneSequence(xs), b, ps, g, dist));
  });
  const std::size_t k = t.good.size();
  t.rv.assign(static_cast<std::size_t>(n), std::vector<BigNat>(k * k, 0));
  t.rtv = t.rv;
  for (Vertex v = 1; v <= n; ++v) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        const auto w = distinguishing_weights(v, t.good[a], t.good[b]);
        t.rv[v - 1][a * k + b] = w.r_v;
        t.rtv[v - 1][a * k + b] = w.r_tilde_v;
      }
    }
  }
  return t;
}

inline void check_subset_sums(CheckResult& sum_res, CheckResult* q_res, const std::string& name,
                              const WeightTables& t, const std::vector<std::size_t>& z, int n, int L,
                              long long cong) {
  const std::size_t k = t.size();
  BigNat q = 0;
  for (std::size_t v = 0; v < t.rv.size(); ++v) {
    BigNat sum_rv = 0, sum_rtv = 0;
    for (std::size_t a : z) {
      for (std::size_t b : z) {
        sum_rv += t.rv[v][a * k + b];
        sum_rtv += t.rtv[v][a * k + b];
      }
    }
    ++sum_res.cases;
    if (sum_rv > 2 * sum_rtv) {
      sum_res.fail(name + " v=" + std::to_string(v + 1) + " |Z|=" + std::to_string(z.size()) +
                   ": sum r_v " + sum_rv.str() + " > 2 * " + sum_rtv.str());
    }
    q = std::max(q, sum_rv);
  }
  if (q_res) {
    ++q_res->cases;
    const BigNat bound = BigNat(z.size()) * 6 * cong * big_pow(n, static_cast<unsigned>(L));
    if (q > bound) q_res->fail(name + " |Z|=" + std::to_string(z.size()) + ": q=" + q.str() + " > " + bound.str());
  }
}

// Runs the r_v lemma and the q(Z) bound together: exhaustive subsets of good
// functions where there are at most 12 of them, sampled subsets otherwise.
inline std::pair<CheckResult, CheckResult> staircase_subset_lemmas(const VerifyOptions& opt) {
  CheckResult sum_res{"staircase", "sum r_v <= 2 sum r~_v"};
  CheckResult q_res{"staircase", "q(Z) <= |Z| 6 g n^L on good-only Z"};
  Rng rng(opt.seed + 3);
  for (int n : {4, 5}) {
    for (const auto& [gname, g] : lemma_graphs(n)) {
      const PathSystem ps = shortest_path_system(g);
      const long long cong = congestion(ps).max_vertex;
      for (int L : {1, 2}) {
        const WeightTables t = weight_tables(g, ps, L);
        const std::string name = gname + " L=" + std::to_string(L);
        const std::size_t k = t.size();
        if (k <= 12) {
          for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
            std::vector<std::size_t> z;
            for (std::size_t i = 0; i < k; ++i) {
              if (mask & (1u << i)) z.push_back(i);
            }
            check_subset_sums(sum_res, &q_res, name, t, z, n, L, cong);
          }
        } else {
          for (int s = 0; s < opt.sampled_subsets; ++s) {
            std::vector<std::size_t> z;
            for (std::size_t i = 0; i < k; ++i) {
              if (rng.bit()) z.push_back(i);
            }
            check_subset_sums(sum_res, &q_res, name, t, z, n, L, cong);
          }
        }
      }
    }
  }
  return {sum_res, q_res};
}

inline CheckResult staircase_sampler(const VerifyOptions& opt) {
  CheckResult res{"staircase", "sampler uniform without replacement"};
  const Graph g = make(GraphKind::clique, 10);
  const PathSystem ps = shortest_path_system(g);
  const int samples = 10000;
  std::vector<int> hits(11, 0);
  for (int s = 0; s < samples; ++s) {
    const auto inst = sample_hard_instance(g, ps, 3, derive_seed(opt.seed + 4, static_cast<std::uint64_t>(s)));
    ++res.cases;
    if (!is_good(inst.x)) res.fail("sampled sequence " + seq(inst.x.values()) + " repeats a milestone");
    ++hits[inst.x.at(2)];
  }
  if (hits[1] != 0) res.fail("vertex 1 drawn at position 2");
  const double p = 1.0 / 9.0;
  const double sigma = std::sqrt(samples * p * (1 - p));
  for (int v = 2; v <= 10; ++v) {
    if (std::abs(hits[v] - samples * p) > 3 * sigma) {
      res.fail("position-2 frequency of vertex " + std::to_string(v) + " is " + std::to_string(hits[v]));
    }
  }
  // At n=4, L=1 every good F carries the same mass M({F}) = 24, so uniform
  // sampling over good x is proportional to M.
  const Graph k4 = make(GraphKind::clique, 4);
  const PathSystem ps4 = shortest_path_system(k4);
  std::vector<int> second(5, 0);
  for (int s = 0; s < 6000; ++s) {
    ++second[sample_hard_instance(k4, ps4, 1, derive_seed(opt.seed + 5, static_cast<std::uint64_t>(s))).x.at(2)];
  }
  for (int v = 2; v <= 4; ++v) {
    if (m_single(4, {1, v}) != 24) res.fail("M({F}) at x=(1," + std::to_string(v) + ") is not 24");
    const double sd = std::sqrt(6000 * (1.0 / 3) * (2.0 / 3));
    if (std::abs(second[v] - 2000) > 3 * sd) res.fail("n=4 sampler frequency of " + std::to_string(v) + " off");
  }
  return res;
}

// ---------------------------------------------------------------- separation

inline CheckResult separation_grid_arrangements(const VerifyOptions&) {
  CheckResult res{"separation", "grid arrangements verify (sides 2-4)"};
  for (int side = 2; side <= 4; ++side) {
    ++res.cases;
    if (auto why = check_arrangement(grid_path_arrangement(side), make(GraphKind::grid, side))) {
      res.fail("side " + std::to_string(side) + ": " + *why);
    }
  }
  return res;
}

inline CheckResult separation_valid_functions(const VerifyOptions& opt) {
  CheckResult res{"separation", "separation functions valid with unique minimum"};
  for (int side : {3, 4}) {
    const Graph g = make(GraphKind::grid, side);
    const PathArrangement pa = grid_path_arrangement(side);
    for (int c : {1, 2}) {
      if (side == 3 && c == 2) continue;
      for_each_sequence(side, 2 * c, [&](const std::vector<int>& xs) {
        ++res.cases;
        const std::string name = "side " + std::to_string(side) + " x=" + seq(xs);
        const VertexSequence walk = cluster_staircase(ClusterSequence(xs), pa, g);
        if (walk.front() != pa.v_start()) res.fail(name + ": walk does not start at v_start");
        for (std::size_t i = 1; i < walk.size(); ++i) {
          if (!g.has_edge(walk[i - 1], walk[i])) res.fail(name + ": walk is not edge-consecutive");
        }
        const ValueFunction f = apply_fault(walk_value_function(walk, g), walk, opt.fault);
        if (auto why = check_valid(g, f, walk)) res.fail(name + ": " + *why);
        const auto minima = local_minima(g, f);
        if (minima.size() != 1 || minima.front() != walk.back()) {
          res.fail(name + ": local minima " + seq(minima));
        }
      });
    }
  }
  return res;
}

inline CheckResult separation_m_large(const VerifyOptions&) {
  CheckResult res{"separation", "separation M({F}) >= (c+1) m^{2c+1} / 2e"};
  for (int m : {4, 5, 6}) {
    for (int c : {1, 2}) {
      for_each_sequence(m, 2 * c, [&](const std::vector<int>& xs) {
        if (!all_distinct(xs)) return;
        ++res.cases;
        const ClusterSequence x(xs);
        BigNat total = 0;
        for_each_sequence(m, 2 * c, [&](const std::vector<int>& ys) {
          total += relation_separation(x, 0, ClusterSequence(ys), 1, m);
        });
        const BigNat target = (c + 1) * big_pow(m, static_cast<unsigned>(2 * c + 1));
        if (Rational(total) * 2 * e_lower() < Rational(target)) {
          res.fail("m=" + std::to_string(m) + " x=" + seq(xs) + ": M=" + total.str());
        }
      });
    }
  }
  return res;
}

struct SeparationCountReport {
  CheckResult check{"separation", "separation count formula"};
  // Cases where the odd-index class differs from the closed form.
  long long odd_class_mismatches = 0;
  long long odd_class_cases = 0;
};

// For odd j the closed form counts good y whose agreeing prefix ends exactly
// at j. The class "largest odd agreeing index = j" additionally holds the y
// that agree through j+1 and then diverge at j+2.
inline SeparationCountReport separation_count(const VerifyOptions&) {
  SeparationCountReport rep;
  CheckResult& res = rep.check;
  for (int m = 3; m <= 6; ++m) {
    for (int c = 1; c <= 2; ++c) {
      const int top = 2 * c + 1;
      if (top > m) continue;
      std::vector<std::vector<int>> good;
      for_each_sequence(m, 2 * c, [&](const std::vector<int>& ys) {
        if (all_distinct(ys)) good.push_back(ys);
      });
      for (const auto& x : good) {
        for (int j = 1; j < top; j += 2) {
          long long plain = 0, odd_class = 0;
          for (const auto& y : good) {
            if (agreeing_prefix(x, y) == j) ++plain;
            if (odd_agreeing_prefix(x, y) == j) ++odd_class;
          }
          const BigNat formula = divergent_count(m, j, top);
          const BigNat corrected = formula + divergent_count(m, j + 1, top);
          ++res.cases;
          const std::string name = "m=" + std::to_string(m) + " x=" + seq(x) + " j=" + std::to_string(j);
          if (BigNat(plain) != formula) res.fail(name + ": exact-prefix count " + std::to_string(plain));
          if (BigNat(odd_class) != corrected) res.fail(name + ": odd-class count " + std::to_string(odd_class));
          if (BigNat(odd_class) < formula) res.fail(name + ": odd-class count below closed form");
          ++rep.odd_class_cases;
          if (BigNat(odd_class) != formula) ++rep.odd_class_mismatches;
        }
      }
    }
  }
  return rep;
}

inline CheckResult separation_m_bound(const VerifyOptions&) {
  CheckResult res{"separation", "arrangement parameter bound arithmetic"};
  const std::vector<std::array<long long, 3>> table = {
      {162, 1, 9}, {0, 1, 1}, {8, 1, 2}, {7, 1, 1}, {18, 1, 3}, {50, 1, 5}, {324, 2, 9}, {1, 3, 1}, {200, 4, 5}};
  for (const auto& [s, delta, expected] : table) {
    ++res.cases;
    const int got = arrangement_parameter_bound(s, delta);
    if (got != expected) {
      res.fail("s=" + std::to_string(s) + " delta=" + std::to_string(delta) + ": " + std::to_string(got));
    }
  }
  return res;
}

// ---------------------------------------------------------------- adversary

template <typename Value>
void for_each_subset(const FunctionFamily<Value>& fam, const std::function<void(const Subset&)>& visit) {
  const std::size_t k = fam.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    Subset z;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::uint64_t{1} << i)) z.push_back(i);
    }
    visit(z);
  }
}

// Naive minimum of M/q over every subset, independent of the Gray-code search.
template <typename Value>
Rational naive_min_ratio(const FunctionFamily<Value>& fam, const Relation& r) {
  bool found = false;
  Rational best = 0;
  for_each_subset(fam, [&](const Subset& z) {
    const BigNat q = big_q(fam, r, z);
    if (q == 0) return;
    const Rational ratio(big_m(fam, r, z), q);
    if (!found || ratio < best) best = ratio;
    found = true;
  });
  return best;
}

inline CheckResult adversary_matrix_closed_form(const VerifyOptions&) {
  CheckResult res{"adversary", "matrix game min M/q = k^2/(2k-1), v_min = 1"};
  for (int k = 2; k <= 4; ++k) {
    ++res.cases;
    const MatrixGame game = family_matrix_game(k);
    const VariantBound vb = variant_bound_exhaustive(game.family, game.relation);
    const Rational expected(k * k, 2 * k - 1);
    if (vb.min_ratio != expected) res.fail("k=" + std::to_string(k) + ": min ratio " + rational_string(vb.min_ratio));
    if (vb.bound * 100 != expected) res.fail("k=" + std::to_string(k) + ": bound mismatch");
    if (naive_min_ratio(game.family, game.relation) != expected) res.fail("k=" + std::to_string(k) + ": naive search disagrees");
    const AaronsonBound ab = aaronson_vmin(game.family, game.relation);
    if (ab.vmin != 1 || ab.bound != Rational(1, 5)) res.fail("k=" + std::to_string(k) + ": v_min " + rational_string(ab.vmin));
  }
  return res;
}

inline CheckResult adversary_matrix_laws(const VerifyOptions&) {
  CheckResult res{"adversary", "matrix game M(Z) = |Z| k and q(Z) <= M(Z)"};
  for (int k = 2; k <= 4; ++k) {
    const MatrixGame game = family_matrix_game(k);
    game.relation.validate(game.family.labels);
    for_each_subset(game.family, [&](const Subset& z) {
      ++res.cases;
      const BigNat m = big_m(game.family, game.relation, z);
      if (m != BigNat(z.size()) * k) res.fail("k=" + std::to_string(k) + " |Z|=" + std::to_string(z.size()) + ": M=" + m.str());
      if (big_q(game.family, game.relation, z) > m) res.fail("k=" + std::to_string(k) + ": q > M");
    });
  }
  return res;
}

template <typename Value>
void check_stronger(CheckResult& res, const std::string& name, const FunctionFamily<Value>& fam, const Relation& r) {
  r.validate(fam.labels);
  const AaronsonBound ab = aaronson_vmin(fam, r);
  const Rational floor = Rational(1) / (2 * ab.vmin);
  for_each_subset(fam, [&](const Subset& z) {
    ++res.cases;
    const BigNat q = big_q(fam, r, z);
    const BigNat m = big_m(fam, r, z);
    if (q > m) res.fail(name + ": q(Z) > M(Z) at |Z|=" + std::to_string(z.size()));
    if (q > 0 && Rational(m, q) < floor) res.fail(name + ": M/q below 1/(2 v_min) at |Z|=" + std::to_string(z.size()));
  });
}

inline CheckResult adversary_stronger(const VerifyOptions&) {
  CheckResult res{"adversary", "every Z with q > 0 has M/q >= 1/(2 v_min)"};
  for (int k = 2; k <= 4; ++k) {
    const MatrixGame game = family_matrix_game(k);
    check_stronger(res, "matrix k=" + std::to_string(k), game.family, game.relation);
  }
  for (const auto& [name, g] : lemma_graphs(4)) {
    const StaircaseFamily fam = family_staircase(g, shortest_path_system(g), 1);
    check_stronger(res, "staircase " + name, fam.family, fam.relation);
    const VariantBound vb = variant_bound_exhaustive(fam.family, fam.relation);
    if (vb.bound <= 0) res.fail("staircase " + name + ": variant bound not positive");
  }
  return res;
}

inline CheckResult adversary_diagonal(const VerifyOptions&) {
  CheckResult res{"adversary", "diagonal solver <= k queries and correct (k <= 16)"};
  for (int k = 2; k <= 16; ++k) {
    const MatrixGame game = family_matrix_game(k);
    for (std::size_t f = 0; f < game.family.size(); ++f) {
      ++res.cases;
      const auto& cells = game.family.functions[f];
      const auto ans = matrix_game_diagonal_solver(
          [&](int i, int j) { return cells[static_cast<std::size_t>((i - 1) * k + (j - 1))]; }, k);
      if (ans.label != game.family.labels[f] || ans.queries > k) {
        res.fail("k=" + std::to_string(k) + " function " + std::to_string(f) + ": label " + std::to_string(ans.label) +
                 " after " + std::to_string(ans.queries) + " queries");
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------- solvers

struct SolverFamily {
  std::string name;
  Graph graph;
  PathSystem paths;
};

inline std::vector<SolverFamily> solver_families() {
  std::vector<SolverFamily> fams;
  for (int dim = 3; dim <= 8; ++dim) {
    Graph g = make(GraphKind::hypercube, dim);
    PathSystem ps = hypercube_path_system(g);
    fams.push_back({"Q" + std::to_string(dim), std::move(g), std::move(ps)});
  }
  for (int side : {3, 5}) {
    Graph g = make(GraphKind::grid, side);
    PathSystem ps = shortest_path_system(g);
    fams.push_back({"grid" + std::to_string(side), std::move(g), std::move(ps)});
  }
  for (int n : {6, 10}) {
    Graph g = make(GraphKind::clique, n);
    PathSystem ps = shortest_path_system(g);
    fams.push_back({"K" + std::to_string(n), std::move(g), std::move(ps)});
  }
  return fams;
}

inline std::vector<CheckResult> solver_checks(const VerifyOptions& opt) {
  CheckResult correct{"solvers", "solvers return the unique minimum and hidden bit"};
  CheckResult accounting{"solvers", "query accounting bounds"};
  CheckResult monotone{"solvers", "descent values strictly decrease"};
  CheckResult determinism{"solvers", "transcripts deterministic under seed"};
  for (const auto& fam : solver_families()) {
    const Graph& g = fam.graph;
    const int L = default_staircase_length(g.size());
    for (int trial = 0; trial < opt.random_instances; ++trial) {
      const std::uint64_t seed = derive_seed(opt.seed + 6, static_cast<std::uint64_t>(trial));
      const HardInstance inst = sample_hard_instance(g, fam.paths, L, seed);
      for (int which = 0; which < 2; ++which) {
        const std::string name = fam.name + " trial " + std::to_string(trial) + (which ? " warm-start" : " descent");
        auto run = [&](const Graph&, QueryOracle& o) {
          if (which == 0) return steepest_descent(g, o, 1);
          return warm_start_descent(g, o, auto_warm_start_samples(g), seed);
        };
        QueryOracle oracle(inst.g);
        SolverResult res;
        ++correct.cases;
        try {
          res = solve_decision(g, oracle, run);
        } catch (const InnerSolverError& e) {
          correct.fail(name + ": " + e.what());
          continue;
        }
        if (res.vertex != inst.stairs.last() || res.bit != inst.bit) {
          correct.fail(name + ": returned " + std::to_string(res.vertex));
        }
        ++accounting.cases;
        if (res.queries > g.size()) accounting.fail(name + ": more queries than vertices");
        if (which == 0) {
          QueryOracle plain(inst.g);
          const SolverResult d = steepest_descent(g, plain, 1);
          if (d.queries > 1 + (d.steps + 1) * g.max_degree()) accounting.fail(name + ": descent over budget");
        }
        ++monotone.cases;
        for (std::size_t i = 1; i < res.moves.size(); ++i) {
          if (!(inst.g.base[res.moves[i]] < inst.g.base[res.moves[i - 1]])) {
            monotone.fail(name + ": move " + std::to_string(i) + " does not decrease");
          }
        }
        if (trial < 20) {
          ++determinism.cases;
          QueryOracle again(inst.g);
          solve_decision(g, again, run);
          if (again.transcript() != oracle.transcript()) determinism.fail(name + ": transcript differs on rerun");
        }
      }
    }
  }
  return {correct, accounting, monotone, determinism};
}

inline CheckResult bench_determinism(const VerifyOptions&) {
  CheckResult res{"bench", "byte-identical CSV across reruns and worker counts"};
  BenchConfig cfg;
  cfg.graph_kind = "hypercube";
  cfg.graph = make(GraphKind::hypercube, 6);
  cfg.strategy = Strategy::hypercube;
  cfg.solvers = {{SolverSpec::Kind::descent, std::nullopt}, {SolverSpec::Kind::warm_start, std::nullopt}};
  cfg.trials = 40;
  cfg.master_seed = 12345;
  const std::string first = to_csv(run_bench(cfg));
  const std::string second = to_csv(run_bench(cfg));
  cfg.workers = 4;
  const std::string threaded = to_csv(run_bench(cfg));
  res.cases = 3;
  if (first != second) res.fail("rerun changed the CSV");
  if (first != threaded) res.fail("4 workers changed the CSV");
  return res;
}

}  // namespace checks

inline const std::vector<std::string>& verify_scopes() {
  static const std::vector<std::string> scopes = {"graph", "paths", "staircase", "separation",
                                                  "adversary", "solvers", "bench"};
  return scopes;
}

inline std::vector<CheckResult> run_verify(const std::string& scope, const VerifyOptions& opt = {}) {
  const bool all = scope == "all";
  if (!all && std::find(verify_scopes().begin(), verify_scopes().end(), scope) == verify_scopes().end()) {
    throw ArgumentError("scope: unknown value '" + scope + "'");
  }
  std::vector<CheckResult> out;
  auto want = [&](const char* s) { return all || scope == s; };
  if (want("graph")) {
    out.push_back(checks::graph_determinism(opt));
    out.push_back(checks::graph_distances(opt));
    out.push_back(checks::graph_expansion(opt));
    out.push_back(checks::graph_separation_relabel(opt));
  }
  if (want("paths")) {
    out.push_back(checks::paths_congestion_range(opt));
    out.push_back(checks::paths_oracle_dominance(opt));
    out.push_back(checks::paths_cayley_uniform(opt));
    out.push_back(checks::paths_hypercube_formula(opt));
    out.push_back(checks::paths_roundtrip(opt));
  }
  if (want("staircase")) {
    out.push_back(checks::staircase_unique_minimum_exhaustive(opt));
    out.push_back(checks::staircase_unique_minimum_random(opt));
    out.push_back(checks::staircase_m_large(opt));
    out.push_back(checks::staircase_count_y(opt));
    out.push_back(checks::staircase_tail_bound(opt));
    auto [sum_rv, q_bound] = checks::staircase_subset_lemmas(opt);
    out.push_back(sum_rv);
    out.push_back(q_bound);
    out.push_back(checks::staircase_sampler(opt));
  }
  if (want("separation")) {
    out.push_back(checks::separation_grid_arrangements(opt));
    out.push_back(checks::separation_valid_functions(opt));
    out.push_back(checks::separation_m_large(opt));
    out.push_back(checks::separation_count(opt).check);
    out.push_back(checks::separation_m_bound(opt));
  }
  if (want("adversary")) {
    out.push_back(checks::adversary_matrix_closed_form(opt));
    out.push_back(checks::adversary_matrix_laws(opt));
    out.push_back(checks::adversary_stronger(opt));
    out.push_back(checks::adversary_diagonal(opt));
  }
  if (want("solvers")) {
    for (auto& r : checks::solver_checks(opt)) out.push_back(std::move(r));
  }
  if (want("bench")) out.push_back(checks::bench_determinism(opt));
  return out;
}

inline Json to_json(const std::vector<CheckResult>& results) {
  Json list = Json::array();
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.passed;
    Json entry{{"module", r.module}, {"name", r.name}, {"passed", r.passed}, {"cases", r.cases}};
    if (!r.passed) entry["counterexample"] = r.detail;
    list.push_back(entry);
  }
  return Json{{"passed", ok}, {"checks", list}};
}

}  // namespace lsqlab
