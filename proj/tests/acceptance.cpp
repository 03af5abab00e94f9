// Acceptance gate: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Every tolerance and time limit is fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fixtures.hpp"

using namespace lsqlab;
using fixtures::graph_of;

namespace {

constexpr double kC1Seconds = 30;
constexpr double kC2Seconds = 1;
constexpr double kC3Seconds = 5;
constexpr double kC4Seconds = 10;
constexpr double kC5Seconds = 60;
constexpr double kC6Seconds = 60;
constexpr double kC7Seconds = 60;
constexpr double kC8Seconds = 300;
constexpr double kC9Seconds = 300;

constexpr int kRandomInstances = 1000;
constexpr int kSampledSubsets = 1000;
constexpr int kScalingTrials = 200;
constexpr double kScalingConstant = 5.0;
constexpr double kGrowthPerTwoDims = 3.0;
constexpr double kDescentAdvantage = 2.0;
constexpr int kRelabelings = 20;

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) note << what;
    ok = ok && cond;
  }
  void absorb(const CheckResult& r) {
    require(r.passed, r.name + ": " + r.detail);
  }
};

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

VerifyOptions suite_options() {
  VerifyOptions opt;
  opt.random_instances = kRandomInstances;
  opt.sampled_subsets = kSampledSubsets;
  return opt;
}

void c1(Outcome& out) {
  const VerifyOptions opt = suite_options();
  const CheckResult exhaustive = checks::staircase_unique_minimum_exhaustive(opt);
  const CheckResult random = checks::staircase_unique_minimum_random(opt);
  out.absorb(exhaustive);
  out.absorb(random);
  out.require(random.cases == kRandomInstances, "wrong random instance count");
  out.note << exhaustive.cases << " exhaustive + " << random.cases << " random instances";
}

void c2(Outcome& out) {
  fixtures::RevisitExample rev;
  out.require(build_staircase(rev.x, rev.ps).walk == VertexSequence{1, 3, 5, 6, 7, 8, 9, 6, 10, 3, 11},
              "revisit staircase sequence differs");

  fixtures::GridExample grid;
  const ValueFunction f = value_function(grid.x, grid.ps, grid.g);
  out.require(f[4] == 3, "grid f(v4) = " + std::to_string(f[4]));
  out.require(f[7] == -50, "grid f(v7) = " + std::to_string(f[7]));

  fixtures::NineNodeExample nine;
  const auto v = &fixtures::NineNodeExample::v;
  const VertexSequence walk = cluster_staircase(ClusterSequence({1, 3, 3, 1, 2}), nine.pa, nine.g);
  out.require(walk == VertexSequence{v(0), v(1), v(2), v(5), v(8), v(7), v(6), v(0), v(3)},
              "nine-node separation walk differs");
  out.note << "staircase, grid values, nine-node walk";
}

void c3(Outcome& out) {
  for (int k = 2; k <= 16; ++k) {
    const MatrixGame game = family_matrix_game(k);
    for (std::size_t f = 0; f < game.family.size(); ++f) {
      const auto& cells = game.family.functions[f];
      const auto ans = matrix_game_diagonal_solver(
          [&](int i, int j) { return cells[static_cast<std::size_t>((i - 1) * k + (j - 1))]; }, k);
      out.require(ans.label == game.family.labels[f] && ans.queries <= k,
                  "diagonal solver wrong at k=" + std::to_string(k));
    }
  }
  for (int k = 2; k <= 4; ++k) {
    const MatrixGame game = family_matrix_game(k);
    const VariantBound vb = variant_bound_exhaustive(game.family, game.relation, worker_count());
    const AaronsonBound ab = aaronson_vmin(game.family, game.relation);
    const std::string at = " at k=" + std::to_string(k);
    out.require(vb.min_ratio == Rational(k * k, 2 * k - 1), "min M/q = " + rational_string(vb.min_ratio) + at);
    out.require(ab.vmin == 1 && ab.bound == Rational(1, 5), "v_min = " + rational_string(ab.vmin) + at);
    // Both sides unscaled: min M/q against the floor 1/(2 v_min).
    out.require(vb.min_ratio > Rational(1) / (2 * ab.vmin), "variant not stronger" + at);
  }
  out.note << "k<=16 diagonal, min M/q = k^2/(2k-1), v_min = 1";
}

void c4(Outcome& out) {
  for (int b = 1; b <= 4; ++b) {
    const Graph g = graph_of(GraphKind::hypercube, b);
    const PathSystem ps = hypercube_path_system(g);
    ps.validate(g);
    const long long N = 1LL << b;
    out.require(2 * congestion(ps).max_vertex == N * (2 + b), "hypercube congestion off at b=" + std::to_string(b));
  }
  const std::vector<std::pair<std::string, CayleyGroup>> groups = {
      {"C5", cyclic_group(5, {1, 4})},
      {"C6", cyclic_group(6, {1, 5})},
      {"Z2xZ2", direct_product(cyclic_group(2, {1}), cyclic_group(2, {1}))}};
  for (const auto& [name, group] : groups) {
    const Graph g = cayley_graph(group);
    const PathSystem ps = cayley_path_system(g, group);
    ps.validate(g);
    const auto prof = congestion(ps);
    const long long first = prof.per_vertex[1];
    bool uniform = true;
    for (long long c : prof.per_vertex) uniform = uniform && c == first;
    out.require(uniform, name + " congestion not uniform");
    out.require(first <= (graph_metrics(g).diameter + 1) * static_cast<long long>(g.size()),
                name + " congestion above (diameter+1) n");
  }
  for (const auto& [name, g] : std::vector<std::pair<std::string, Graph>>{
           {"K4", graph_of(GraphKind::clique, 4)}, {"P3", fixtures::path_graph(3)}}) {
    const long long best = min_congestion_oracle(g).g_star;
    const long long bfs = congestion(shortest_path_system(g)).max_vertex;
    out.require(best == bfs, name + ": oracle " + std::to_string(best) + " vs shortest paths " + std::to_string(bfs));
  }
  out.note << "hypercube b=1..4, Cayley C5/C6/Z2xZ2, oracle on K4 and P3";
}

void c5(Outcome& out) {
  const VerifyOptions opt = suite_options();
  long long cases = 0;
  for (const auto& r : {checks::staircase_m_large(opt), checks::staircase_count_y(opt),
                        checks::staircase_tail_bound(opt)}) {
    out.absorb(r);
    cases += r.cases;
  }
  auto [sum_rv, q_bound] = checks::staircase_subset_lemmas(opt);
  out.absorb(sum_rv);
  out.absorb(q_bound);
  cases += sum_rv.cases + q_bound.cases;
  out.note << cases << " cases";
}

void c6(Outcome& out) {
  const VerifyOptions opt = suite_options();
  long long cases = 0;
  for (const auto& r : {checks::separation_grid_arrangements(opt), checks::separation_valid_functions(opt),
                        checks::separation_m_large(opt), checks::separation_m_bound(opt)}) {
    out.absorb(r);
    cases += r.cases;
  }
  const auto count = checks::separation_count(opt);
  out.absorb(count.check);
  cases += count.check.cases;
  out.note << cases << " cases; odd-index class differs from the closed form in " << count.odd_class_mismatches
           << "/" << count.odd_class_cases;
}

void c7(Outcome& out) {
  Rng rng(7);
  for (int n : {8, 16}) {
    const Graph g = graph_of(GraphKind::barbell, n);
    const std::size_t cap = static_cast<std::size_t>(n);
    const int s = separation_number_exact(g, cap);
    out.require(s == n / 8, "s(barbell" + std::to_string(n) + ") = " + std::to_string(s));
    for (int k = 0; k < kRelabelings; ++k) {
      std::vector<Vertex> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 1);
      for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
      const int t = separation_number_exact(g.relabeled(perm), cap);
      out.require(t == s, "relabeled barbell" + std::to_string(n) + " gives " + std::to_string(t));
    }
  }
  out.note << "s(barbell8) = 1, s(barbell16) = 2, " << kRelabelings << " relabelings each";
}

BenchConfig hypercube_bench(int dim, int trials, std::uint64_t seed, unsigned workers) {
  BenchConfig cfg;
  cfg.graph_kind = "hypercube";
  cfg.graph = graph_of(GraphKind::hypercube, dim);
  cfg.strategy = Strategy::hypercube;
  cfg.solvers = {{SolverSpec::Kind::descent, std::nullopt}, {SolverSpec::Kind::warm_start, std::nullopt}};
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.workers = workers;
  return cfg;
}

void c8(Outcome& out) {
  double previous = 0;
  for (int dim : {6, 8, 10}) {
    const BenchReport report = run_bench(hypercube_bench(dim, kScalingTrials, 2024, worker_count()));
    out.require(report.all_correct(), "wrong answer at dim " + std::to_string(dim));
    double descent = 0, warm = 0;
    for (const auto& a : report.aggregates) (a.solver == "descent" ? descent : warm) = a.mean;
    const double n = std::ldexp(1.0, dim);
    const double limit = kScalingConstant * std::sqrt(n * dim);
    const std::string at = " at dim " + std::to_string(dim);
    out.require(warm <= limit, "warm-start mean " + std::to_string(warm) + " > " + std::to_string(limit) + at);
    if (previous > 0) {
      out.require(warm <= kGrowthPerTwoDims * previous, "warm-start growth above 3x" + at);
    }
    out.require(descent * kDescentAdvantage >= warm, "descent more than 2x better" + at);
    char line[128];
    std::snprintf(line, sizeof line, "%sdim %d: warm %.1f (limit %.1f), descent %.1f", previous > 0 ? "; " : "",
                  dim, warm, limit, descent);
    out.note << line;
    previous = warm;
  }
}

void c9(Outcome& out) {
  std::vector<BenchConfig> configs = {hypercube_bench(6, 60, 1, 1), hypercube_bench(8, 30, 99, 1)};
  BenchConfig grid;
  grid.graph_kind = "grid";
  grid.graph = graph_of(GraphKind::grid, 5);
  grid.c = 2;
  grid.solvers = {{SolverSpec::Kind::descent, std::nullopt}, {SolverSpec::Kind::warm_start, 3}};
  grid.trials = 50;
  grid.master_seed = 5;
  configs.push_back(grid);
  BenchConfig rr;
  rr.graph_kind = "random_regular";
  GraphSpec spec;
  spec.kind = GraphKind::random_regular;
  spec.n = 40;
  spec.d = 4;
  spec.seed = 11;
  rr.graph = build_graph(spec);
  rr.solvers = {{SolverSpec::Kind::warm_start, std::nullopt}};
  rr.trials = 50;
  rr.master_seed = 17;
  configs.push_back(rr);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    BenchConfig cfg = configs[i];
    const std::string first = to_csv(run_bench(cfg));
    out.require(to_csv(run_bench(cfg)) == first, "rerun differs for config " + std::to_string(i));
    for (unsigned workers : {2u, 4u, 8u}) {
      cfg.workers = workers;
      out.require(to_csv(run_bench(cfg)) == first,
                  std::to_string(workers) + " workers differ for config " + std::to_string(i));
    }
  }
  out.note << configs.size() << " configs, reruns and 1/2/4/8 workers";
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "unique local minimum", kC1Seconds, c1},
      {2, "worked examples", kC2Seconds, c2},
      {3, "matrix game bounds", kC3Seconds, c3},
      {4, "congestion formulas", kC4Seconds, c4},
      {5, "staircase lemma suite", kC5Seconds, c5},
      {6, "separation suite", kC6Seconds, c6},
      {7, "separation number of barbells", kC7Seconds, c7},
      {8, "solver scaling on hypercubes", kC8Seconds, c8},
      {9, "bench determinism", kC9Seconds, c9},
  };
  bool all = true;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs", seconds);
    out.require(seconds < c.limit_seconds, "over time limit");
    std::cout << (out.ok ? "[PASS] " : "[FAIL] ") << "C" << c.id << " " << c.title << " (" << timing << ", limit "
              << c.limit_seconds << "s): " << out.note.str() << std::endl;
    all = all && out.ok;
  }
  return all ? 0 : 1;
}
