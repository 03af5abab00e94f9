#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"

using namespace lsqlab;
using fixtures::graph_of;

namespace {

const SolverSpec kDescent{SolverSpec::Kind::descent, std::nullopt};
const SolverSpec kWarm{SolverSpec::Kind::warm_start, std::nullopt};

BenchConfig hypercube_config(int dim, int trials) {
  BenchConfig cfg;
  cfg.graph_kind = "hypercube";
  cfg.graph = graph_of(GraphKind::hypercube, dim);
  cfg.strategy = Strategy::hypercube;
  cfg.solvers = {kDescent, kWarm};
  cfg.trials = trials;
  cfg.master_seed = 4242;
  return cfg;
}

std::string error_of(const BenchConfig& cfg) {
  try {
    validate(cfg);
  } catch (const ArgumentError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Bench, CsvHeaderAndRowCount) {
  const BenchReport report = run_bench(hypercube_config(4, 5));
  const std::string csv = to_csv(report);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "graph_kind,n,delta,g,L,solver,trial,seed,queries,correct");
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 10);
  EXPECT_EQ(report.rows.front().solver, "descent");
  EXPECT_EQ(report.rows.back().solver, "warm-start");
  EXPECT_EQ(report.rows.front().g, 48);
  EXPECT_EQ(report.rows.front().L, 3);
}

TEST(Bench, DeterministicAcrossRerunsAndWorkers) {
  BenchConfig cfg = hypercube_config(5, 24);
  const std::string first = to_csv(run_bench(cfg));
  EXPECT_EQ(to_csv(run_bench(cfg)), first);
  cfg.workers = 4;
  EXPECT_EQ(to_csv(run_bench(cfg)), first);
  cfg.workers = 64;
  EXPECT_EQ(to_csv(run_bench(cfg)), first);
  cfg.master_seed += 1;
  EXPECT_NE(to_csv(run_bench(cfg)), first);
}

TEST(Bench, SeedsFollowTheMixer) {
  const BenchReport report = run_bench(hypercube_config(3, 3));
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.seed, derive_seed(4242, static_cast<std::uint64_t>(row.trial)));
  }
}

TEST(Bench, CliqueStaircaseAllCorrect) {
  BenchConfig cfg;
  cfg.graph_kind = "clique";
  cfg.graph = graph_of(GraphKind::clique, 4);
  cfg.L = 1;
  cfg.solvers = {kDescent, kWarm, SolverSpec{SolverSpec::Kind::warm_start, 2}};
  cfg.trials = 30;
  const BenchReport report = run_bench(cfg);
  EXPECT_TRUE(report.all_correct());
  EXPECT_EQ(report.rows.size(), 90u);
  ASSERT_EQ(report.aggregates.size(), 3u);
  EXPECT_EQ(report.aggregates[2].solver, "warm-start:t=2");
  for (const auto& row : report.rows) EXPECT_LE(row.queries, 4);
}

TEST(Bench, BruteStrategyUsesOptimalCongestion) {
  BenchConfig cfg;
  cfg.graph_kind = "ring";
  cfg.graph = graph_of(GraphKind::ring, 4);
  cfg.strategy = Strategy::brute;
  cfg.solvers = {kDescent};
  const BenchReport report = run_bench(cfg);
  EXPECT_EQ(report.rows.front().g, 8);
  EXPECT_TRUE(report.all_correct());
}

TEST(Bench, SeparationInstancesOnGrid) {
  BenchConfig cfg;
  cfg.graph_kind = "grid";
  cfg.graph = graph_of(GraphKind::grid, 5);
  cfg.c = 2;
  cfg.solvers = {kDescent, kWarm};
  cfg.trials = 40;
  const BenchReport report = run_bench(cfg);
  EXPECT_TRUE(report.all_correct());
  for (const auto& row : report.rows) EXPECT_EQ(row.L, 2);
}

TEST(Bench, ValidationMessagesNameTheField) {
  auto starts_with = [](const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; };
  BenchConfig cfg = hypercube_config(3, 1);
  cfg.trials = 0;
  EXPECT_TRUE(starts_with(error_of(cfg), "trials:"));
  cfg = hypercube_config(3, 1);
  cfg.solvers.clear();
  EXPECT_TRUE(starts_with(error_of(cfg), "solver:"));
  cfg = hypercube_config(3, 1);
  cfg.solvers = {SolverSpec{SolverSpec::Kind::warm_start, 0}};
  EXPECT_TRUE(starts_with(error_of(cfg), "t:"));
  cfg = hypercube_config(3, 1);
  cfg.L = 8;
  EXPECT_TRUE(starts_with(error_of(cfg), "L:"));
  cfg = hypercube_config(3, 1);
  cfg.graph = graph_of(GraphKind::ring, 8);
  EXPECT_TRUE(starts_with(error_of(cfg), "strategy:"));
  cfg = hypercube_config(3, 1);
  cfg.strategy = Strategy::cayley;
  EXPECT_TRUE(starts_with(error_of(cfg), "strategy:"));
  cfg = hypercube_config(3, 1);
  cfg.c = 1;
  EXPECT_TRUE(starts_with(error_of(cfg), "c:"));
  cfg.graph_kind = "grid";
  cfg.graph = graph_of(GraphKind::grid, 4);
  cfg.strategy = Strategy::bfs;
  cfg.c = 2;
  EXPECT_TRUE(starts_with(error_of(cfg), "c:"));
  EXPECT_THROW(parse_strategy("dijkstra"), ArgumentError);
}

TEST(Bench, DefaultStaircaseLength) {
  EXPECT_EQ(default_staircase_length(1), 1);
  EXPECT_EQ(default_staircase_length(4), 1);
  EXPECT_EQ(default_staircase_length(16), 3);
  EXPECT_EQ(default_staircase_length(17), 3);
  EXPECT_EQ(default_staircase_length(1024), 31);
}

TEST(Bench, AggregatesByHand) {
  EXPECT_EQ(detail::median_of({5, 1, 3}), 3);
  EXPECT_EQ(detail::median_of({4, 1, 3, 2}), 2.5);
  EXPECT_EQ(detail::p90_of({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), 9);
  EXPECT_EQ(detail::p90_of({7}), 7);
  EXPECT_EQ(detail::p90_of({3, 1, 2}), 3);

  const BenchReport report = run_bench(hypercube_config(4, 9));
  for (const auto& agg : report.aggregates) {
    std::vector<int> q;
    for (const auto& row : report.rows)
      if (row.solver == agg.solver) q.push_back(row.queries);
    double sum = 0;
    for (int v : q) sum += v;
    EXPECT_DOUBLE_EQ(agg.mean, sum / q.size());
    std::sort(q.begin(), q.end());
    EXPECT_EQ(agg.median, q[4]);
    EXPECT_EQ(agg.p90, q[8]);
  }
}

TEST(Bench, JsonMirrorsRows) {
  const BenchReport report = run_bench(hypercube_config(3, 2));
  const Json j = to_json(report);
  ASSERT_EQ(j.at("rows").size(), report.rows.size());
  EXPECT_EQ(j.at("rows")[0].at("queries"), report.rows[0].queries);
  EXPECT_EQ(j.at("aggregates").size(), 2u);
}
