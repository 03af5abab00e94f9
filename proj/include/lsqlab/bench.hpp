#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lsqlab/core.hpp"
#include "lsqlab/graph.hpp"
#include "lsqlab/io.hpp"
#include "lsqlab/path_system.hpp"
#include "lsqlab/random.hpp"
#include "lsqlab/separation.hpp"
#include "lsqlab/solvers.hpp"
#include "lsqlab/staircase.hpp"

namespace lsqlab {

enum class Strategy { bfs, hypercube, cayley, brute };

inline Strategy parse_strategy(const std::string& name) {
  if (name == "bfs") return Strategy::bfs;
  if (name == "hypercube") return Strategy::hypercube;
  if (name == "cayley") return Strategy::cayley;
  if (name == "brute") return Strategy::brute;
  throw ArgumentError("strategy: unknown value '" + name + "' (expected bfs|hypercube|cayley|brute)");
}

inline PathSystem build_path_system(const Graph& g, Strategy strategy,
                                    const std::optional<CayleyGroup>& group = std::nullopt) {
  switch (strategy) {
    case Strategy::bfs: return shortest_path_system(g);
    case Strategy::hypercube: return hypercube_path_system(g);
    case Strategy::cayley:
      if (!group) throw ArgumentError("strategy: cayley needs a group");
      return cayley_path_system(g, *group);
    case Strategy::brute: return min_congestion_oracle(g).paths;
  }
  throw ArgumentError("strategy: unsupported");
}

struct SolverSpec {
  enum class Kind { descent, warm_start };
  Kind kind = Kind::descent;
  // Warm-start sample count; empty means ceil(sqrt(n * max_degree)).
  std::optional<int> t;

  std::string name() const {
    if (kind == Kind::descent) return "descent";
    return t ? "warm-start:t=" + std::to_string(*t) : "warm-start";
  }
};

struct BenchConfig {
  std::string graph_kind = "custom";
  Graph graph;
  Strategy strategy = Strategy::bfs;
  std::optional<CayleyGroup> group;
  // Staircase length; empty means max(1, floor(sqrt(n)) - 1).
  std::optional<int> L;
  // When set, instances come from the grid's column arrangement with c legs.
  std::optional<int> c;
  std::vector<SolverSpec> solvers;
  int trials = 1;
  std::uint64_t master_seed = 0;
  unsigned workers = 1;
};

struct BenchRow {
  std::string graph_kind;
  int n = 0;
  int delta = 0;
  long long g = 0;
  int L = 0;
  std::string solver;
  int trial = 0;
  std::uint64_t seed = 0;
  int queries = 0;
  bool correct = false;
};

struct SolverAggregate {
  std::string solver;
  double mean = 0;
  double median = 0;
  double p90 = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<SolverAggregate> aggregates;

  bool all_correct() const {
    return std::all_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.correct; });
  }
};

inline int default_staircase_length(int n) {
  int root = 0;
  while ((root + 1) * (root + 1) <= n) ++root;
  return std::max(1, root - 1);
}

inline void validate(const BenchConfig& cfg) {
  if (cfg.trials < 1) throw ArgumentError("trials: must be >= 1");
  if (cfg.solvers.empty()) throw ArgumentError("solver: at least one solver is required");
  for (const auto& s : cfg.solvers) {
    if (s.t && *s.t < 1) throw ArgumentError("t: must be >= 1 or auto");
  }
  if (cfg.strategy == Strategy::hypercube && hypercube_dimension(cfg.graph) < 0) {
    throw ArgumentError("strategy: hypercube needs a hypercube graph");
  }
  if (cfg.strategy == Strategy::cayley && !cfg.group) {
    throw ArgumentError("strategy: cayley needs a cayley graph spec");
  }
  if (cfg.c) {
    if (cfg.L) throw ArgumentError("c: give either L or c, not both");
    if (cfg.graph_kind != "grid") throw ArgumentError("c: separation instances need a grid graph");
    int side = 0;
    while (side * side < cfg.graph.size()) ++side;
    if (*cfg.c < 1 || 2 * *cfg.c + 1 > side) {
      throw ArgumentError("c: need 1 <= c and 2c+1 <= side for good cluster sequences");
    }
  } else {
    const int L = cfg.L.value_or(default_staircase_length(cfg.graph.size()));
    if (L < 1 || L + 1 > cfg.graph.size()) throw ArgumentError("L: need 1 <= L <= n-1");
  }
}

namespace detail {

struct TrialInstance {
  HiddenBitFunction g;
  Vertex minimum = 0;
  int bit = 0;
};

// Uniform good cluster sequence (1, distinct entries from [m] \ {1}) and bit.
inline TrialInstance sample_separation_instance(const Graph& g, const PathArrangement& pa, int c,
                                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> pool(static_cast<std::size_t>(pa.m() - 1));
  std::iota(pool.begin(), pool.end(), 2);
  std::vector<int> xs{1};
  for (int i = 0; i < 2 * c; ++i) {
    const std::size_t pick = static_cast<std::size_t>(i) + rng.below(pool.size() - i);
    std::swap(pool[static_cast<std::size_t>(i)], pool[pick]);
    xs.push_back(pool[static_cast<std::size_t>(i)]);
  }
  const int b = rng.bit();
  Staircase s{cluster_staircase(ClusterSequence(xs), pa, g), {}};
  return {hide_bit(walk_value_function(s.walk, g), s, b), s.last(), b};
}

inline double median_of(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 ? v[k / 2] : (v[k / 2 - 1] + v[k / 2]) / 2.0;
}

// Nearest-rank percentile.
inline double p90_of(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  const std::size_t rank = (v.size() * 9 + 9) / 10;
  return v[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace detail

// Trial k uses seed derive_seed(master_seed, k) for the instance; solver s in
// that trial draws from derive_seed(trial_seed, s + 1).
inline BenchReport run_bench(const BenchConfig& cfg) {
  validate(cfg);
  const Graph& graph = cfg.graph;
  const int n = graph.size();
  const PathSystem ps = build_path_system(graph, cfg.strategy, cfg.group);
  const long long g = congestion(ps).max_vertex;
  std::optional<PathArrangement> arrangement;
  if (cfg.c) {
    int side = 0;
    while (side * side < n) ++side;
    arrangement = grid_path_arrangement(side);
  }
  const int L = cfg.c ? *cfg.c : cfg.L.value_or(default_staircase_length(n));
  const std::size_t per_trial = cfg.solvers.size();
  std::vector<BenchRow> rows(static_cast<std::size_t>(cfg.trials) * per_trial);

  auto run_trial = [&](int trial) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(trial));
    detail::TrialInstance inst;
    if (arrangement) {
      inst = detail::sample_separation_instance(graph, *arrangement, L, seed);
    } else {
      HardInstance h = sample_hard_instance(graph, ps, L, seed);
      inst = {std::move(h.g), h.stairs.last(), h.bit};
    }
    for (std::size_t s = 0; s < per_trial; ++s) {
      const SolverSpec& spec = cfg.solvers[s];
      const std::uint64_t solver_seed = derive_seed(seed, s + 1);
      QueryOracle oracle(inst.g);
      InnerSolver inner;
      if (spec.kind == SolverSpec::Kind::descent) {
        inner = [](const Graph& gr, QueryOracle& o) { return steepest_descent(gr, o, 1); };
      } else {
        const int t = spec.t.value_or(auto_warm_start_samples(graph));
        inner = [t, solver_seed](const Graph& gr, QueryOracle& o) {
          return warm_start_descent(gr, o, t, solver_seed);
        };
      }
      bool correct = false;
      try {
        SolverResult res = solve_decision(graph, oracle, inner);
        correct = res.vertex == inst.minimum && res.bit == inst.bit;
      } catch (const InnerSolverError&) {
        correct = false;
      }
      rows[static_cast<std::size_t>(trial) * per_trial + s] =
          BenchRow{cfg.graph_kind, n, graph.max_degree(), g, L, spec.name(), trial, seed,
                   oracle.count(), correct};
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(cfg.trials)));
  if (workers == 1) {
    for (int trial = 0; trial < cfg.trials; ++trial) run_trial(trial);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        for (int trial = static_cast<int>(w); trial < cfg.trials; trial += static_cast<int>(workers)) {
          run_trial(trial);
        }
      });
    }
    for (auto& t : threads) t.join();
  }

  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return a.solver != b.solver ? a.solver < b.solver : a.trial < b.trial;
  });
  BenchReport report;
  report.rows = std::move(rows);
  std::map<std::string, std::vector<int>> by_solver;
  for (const auto& row : report.rows) by_solver[row.solver].push_back(row.queries);
  for (const auto& [solver, queries] : by_solver) {
    double sum = 0;
    for (int q : queries) sum += q;
    report.aggregates.push_back(
        {solver, sum / static_cast<double>(queries.size()), detail::median_of(queries), detail::p90_of(queries)});
  }
  return report;
}

inline std::string to_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "graph_kind,n,delta,g,L,solver,trial,seed,queries,correct\n";
  for (const auto& r : report.rows) {
    out << r.graph_kind << ',' << r.n << ',' << r.delta << ',' << r.g << ',' << r.L << ',' << r.solver
        << ',' << r.trial << ',' << r.seed << ',' << r.queries << ',' << (r.correct ? "true" : "false")
        << '\n';
  }
  return out.str();
}

inline Json to_json(const BenchReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back(Json{{"graph_kind", r.graph_kind}, {"n", r.n},         {"delta", r.delta},
                        {"g", r.g},                   {"L", r.L},         {"solver", r.solver},
                        {"trial", r.trial},           {"seed", r.seed},   {"queries", r.queries},
                        {"correct", r.correct}});
  }
  Json aggregates = Json::array();
  for (const auto& a : report.aggregates) {
    aggregates.push_back(Json{{"solver", a.solver}, {"mean", a.mean}, {"median", a.median}, {"p90", a.p90}});
  }
  return Json{{"rows", rows}, {"aggregates", aggregates}};
}

}  // namespace lsqlab
