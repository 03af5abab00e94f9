// Command-line front end: graph generation, path systems, instances, solvers,
// benchmarks, adversary bounds and the invariant suite.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lsqlab/lsqlab.hpp"

namespace {

using namespace lsqlab;

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
}

struct GraphOptions {
  std::string file;
  std::string kind;
  int dim = 0;
  int side = 0;
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;
  std::vector<int> gens;
  std::string group_file;

  void add_to(CLI::App* app, bool allow_file, const std::string& seed_flag = "--seed") {
    if (allow_file) app->add_option("--graph", file, "Graph JSON file");
    app->add_option("--kind", kind, "hypercube|grid|clique|ring|barbell|cayley|random_regular");
    app->add_option("--dim", dim, "Hypercube dimension");
    app->add_option("--side", side, "Grid side length");
    app->add_option("--n", n, "Vertex count (clique, ring, barbell, random_regular, cyclic cayley)");
    app->add_option("--d", d, "Degree for random_regular");
    app->add_option(seed_flag, seed, "Seed for random_regular");
    app->add_option("--gens", gens, "Cyclic Cayley generators as residues mod n")->delimiter(',');
    app->add_option("--group", group_file, "Group JSON file {\"table\": [[...]], \"generators\": [...]}");
  }

  std::optional<CayleyGroup> group() const {
    if (!group_file.empty()) {
      const Json j = read_json_file(group_file);
      CayleyGroup g;
      g.table = j.at("table").get<std::vector<std::vector<int>>>();
      g.generators = j.at("generators").get<std::vector<int>>();
      g.validate();
      return g;
    }
    if (!gens.empty()) {
      CayleyGroup g = cyclic_group(n, gens);
      g.validate();
      return g;
    }
    return std::nullopt;
  }

  std::string kind_name() const { return file.empty() ? kind : "file"; }

  Graph build() const {
    if (!file.empty()) return graph_from_json(read_json_file(file));
    if (kind.empty()) throw ArgumentError("graph: give --graph <file> or --kind");
    GraphSpec spec;
    spec.kind = parse_graph_kind(kind);
    spec.dim = dim;
    spec.side = side;
    spec.n = n;
    spec.d = d;
    spec.seed = seed;
    if (spec.kind == GraphKind::cayley) {
      auto g = group();
      if (!g) throw ArgumentError("cayley: give --group <file> or --n with --gens");
      spec.group = *g;
    }
    return build_graph(spec);
  }
};

SolverSpec parse_solver(const std::string& name, const std::string& t) {
  SolverSpec spec;
  if (name == "descent") {
    spec.kind = SolverSpec::Kind::descent;
  } else if (name == "warm-start") {
    spec.kind = SolverSpec::Kind::warm_start;
    if (t != "auto") spec.t = std::stoi(t);
  } else {
    throw ArgumentError("solver: unknown value '" + name + "' (expected descent|warm-start)");
  }
  return spec;
}

Fault parse_fault(const std::string& name) {
  if (name.empty() || name == "none") return Fault::none;
  if (name == "flip-on-walk-sign") return Fault::flip_on_walk_sign;
  throw ArgumentError("inject-fault: unknown value '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local-search query complexity laboratory"};
  app.require_subcommand(1);
  std::string out;

  GraphOptions gen_graph;
  auto* gen = app.add_subcommand("gen", "Build a graph and write it as JSON");
  gen_graph.add_to(gen, false);
  gen->add_option("--out", out);

  std::string graph_file, paths_file;
  bool exhaustive = false;
  auto* metrics = app.add_subcommand("metrics", "Degree, diameter and optional exhaustive metrics");
  metrics->add_option("--graph", graph_file)->required();
  metrics->add_flag("--exhaustive", exhaustive, "Also compute edge expansion and separation number");
  metrics->add_option("--out", out);

  GraphOptions paths_graph;
  std::string strategy = "bfs";
  auto* paths = app.add_subcommand("paths", "Build an all-pairs path system");
  paths_graph.add_to(paths, true);
  paths->add_option("--strategy", strategy, "bfs|hypercube|cayley|brute");
  paths->add_option("--out", out);

  auto* cong = app.add_subcommand("congestion", "Congestion profile of a path system");
  cong->add_option("--paths", paths_file)->required();
  cong->add_option("--graph", graph_file, "Validate the paths against this graph");
  cong->add_option("--out", out);

  int L = 0;
  std::uint64_t seed = 0;
  std::vector<int> milestones;
  int bit = -1;
  bool materialize = false;
  auto* instance = app.add_subcommand("instance", "Sample or build a staircase instance");
  instance->add_option("--graph", graph_file)->required();
  instance->add_option("--paths", paths_file)->required();
  instance->add_option("--L", L, "Quasi-segment count for sampling");
  instance->add_option("--seed", seed);
  instance->add_option("--milestones", milestones, "Explicit milestones instead of sampling")->delimiter(',');
  instance->add_option("--bit", bit, "Hidden bit for explicit milestones");
  instance->add_flag("--materialize", materialize, "Store values and flags in the file");
  instance->add_option("--out", out);

  std::string instance_file, solver = "descent", t_text = "auto", transcript_file;
  int start = 1;
  auto* solve = app.add_subcommand("solve", "Run a solver against an instance");
  solve->add_option("--instance", instance_file)->required();
  solve->add_option("--solver", solver, "descent|warm-start");
  solve->add_option("--t", t_text, "Warm-start samples or auto");
  solve->add_option("--seed", seed);
  solve->add_option("--start", start, "Descent start vertex");
  solve->add_option("--transcript", transcript_file, "Write the query transcript here");
  solve->add_option("--out", out);

  GraphOptions bench_graph;
  std::optional<int> bench_L, bench_c;
  std::vector<std::string> solvers;
  int trials = 1;
  unsigned workers = 1;
  std::string format = "csv";
  auto* bench = app.add_subcommand("bench", "Batch benchmark over sampled hard instances");
  bench_graph.add_to(bench, true, "--graph-seed");
  bench->add_option("--seed", seed, "Master seed");
  bench->add_option("--strategy", strategy, "bfs|hypercube|cayley|brute");
  bench->add_option("--L", bench_L);
  bench->add_option("--c", bench_c, "Separation legs on a grid arrangement");
  bench->add_option("--solver", solvers, "descent|warm-start (repeatable)");
  bench->add_option("--t", t_text, "Warm-start samples or auto");
  bench->add_option("--trials", trials);
  bench->add_option("--workers", workers);
  bench->add_option("--format", format, "csv|json");
  bench->add_option("--out", out);

  std::string family = "matrix";
  int k = 3;
  auto* adversary = app.add_subcommand("adversary", "Variant and Aaronson adversary bounds");
  adversary->add_option("--family", family, "matrix|staircase");
  adversary->add_option("--k", k, "Matrix game size");
  adversary->add_option("--graph", graph_file);
  adversary->add_option("--paths", paths_file);
  adversary->add_option("--L", L);
  adversary->add_option("--workers", workers);
  adversary->add_option("--out", out);

  std::string scope = "all", fault;
  int budget = 1000;
  auto* verify = app.add_subcommand("verify", "Run the invariant suites");
  verify->add_option("--scope", scope, "all|graph|paths|staircase|separation|adversary|solvers|bench");
  verify->add_option("--budget", budget, "Random instances and sampled subsets per suite");
  verify->add_option("--seed", seed);
  verify->add_option("--inject-fault", fault, "none|flip-on-walk-sign");
  verify->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      emit(dump(to_json(gen_graph.build())), out);
    } else if (*metrics) {
      const Graph g = graph_from_json(read_json_file(graph_file));
      const GraphMetrics m = graph_metrics(g);
      Json j{{"n", g.size()}, {"edges", g.edges().size()}, {"max_degree", m.max_degree}, {"diameter", m.diameter}};
      if (exhaustive) {
        j["edge_expansion"] = g.size() >= 2 ? rational_string(edge_expansion_exact(g)) : "undefined";
        j["separation_number"] = separation_number_exact(g);
      }
      emit(dump(j), out);
    } else if (*paths) {
      const Graph g = paths_graph.build();
      const PathSystem ps = build_path_system(g, parse_strategy(strategy), paths_graph.group());
      ps.validate(g);
      emit(dump(to_json(ps)), out);
    } else if (*cong) {
      const PathSystem ps = path_system_from_json(read_json_file(paths_file));
      if (!graph_file.empty()) ps.validate(graph_from_json(read_json_file(graph_file)));
      const CongestionProfile p = congestion(ps);
      Json edges = Json::array();
      for (const auto& [e, c] : p.per_edge) edges.push_back(Json::array({e.first, e.second, c}));
      emit(dump(Json{{"max_vertex", p.max_vertex},
                     {"max_edge", p.max_edge},
                     {"per_vertex", p.per_vertex.values()},
                     {"per_edge", edges}}),
           out);
    } else if (*instance) {
      const Graph g = graph_from_json(read_json_file(graph_file));
      const PathSystem ps = path_system_from_json(read_json_file(paths_file));
      ps.validate(g);
      InstanceFile inst{graph_file, paths_file, MilestoneSequence(), 0, std::nullopt, std::nullopt};
      StaircaseFunction f;
      if (!milestones.empty()) {
        if (bit != 0 && bit != 1) throw ArgumentError("bit: explicit milestones need --bit 0|1");
        f = make_staircase_function(MilestoneSequence(milestones), bit, ps, g);
      } else {
        HardInstance h = sample_hard_instance(g, ps, L, seed);
        f = {h.x, h.bit, h.stairs, h.g};
      }
      inst.milestones = f.x;
      inst.bit = f.bit;
      if (materialize) {
        inst.values = f.g.base;
        inst.flags = f.g.flag;
      }
      emit(dump(to_json(inst)), out);
    } else if (*solve) {
      const InstanceFile inst = instance_from_json(read_json_file(instance_file));
      const Graph g = graph_from_json(read_json_file(inst.graph_path));
      const PathSystem ps = path_system_from_json(read_json_file(inst.paths_path));
      ps.validate(g);
      const StaircaseFunction f = make_staircase_function(inst.milestones, inst.bit, ps, g);
      if (inst.values && !(*inst.values == f.g.base)) throw ValidationError("cached values do not match the milestones");
      if (inst.flags && !(*inst.flags == f.g.flag)) throw ValidationError("cached flags do not match the milestones");
      const SolverSpec spec = parse_solver(solver, t_text);
      QueryOracle oracle(f.g);
      InnerSolver inner;
      if (spec.kind == SolverSpec::Kind::descent) {
        inner = [start](const Graph& gr, QueryOracle& o) { return steepest_descent(gr, o, start); };
      } else {
        const int t = spec.t.value_or(auto_warm_start_samples(g));
        inner = [t, seed](const Graph& gr, QueryOracle& o) { return warm_start_descent(gr, o, t, seed); };
      }
      const SolverResult res = solve_decision(g, oracle, inner);
      if (!transcript_file.empty()) write_text_file(transcript_file, dump(to_json(oracle.transcript())));
      const bool correct = res.vertex == f.stairs.last() && res.bit == f.bit;
      emit(dump(Json{{"vertex", res.vertex},
                     {"bit", *res.bit},
                     {"queries", res.queries},
                     {"raw_calls", res.raw_calls},
                     {"steps", res.steps},
                     {"correct", correct}}),
           out);
      if (!correct) return 1;
    } else if (*bench) {
      BenchConfig cfg;
      cfg.graph = bench_graph.build();
      cfg.graph_kind = bench_graph.kind_name();
      cfg.strategy = parse_strategy(strategy);
      cfg.group = bench_graph.group();
      cfg.L = bench_L;
      cfg.c = bench_c;
      if (solvers.empty()) solvers = {"descent", "warm-start"};
      for (const auto& s : solvers) cfg.solvers.push_back(parse_solver(s, t_text));
      cfg.trials = trials;
      cfg.master_seed = seed;
      cfg.workers = workers;
      if (format != "csv" && format != "json") throw ArgumentError("format: expected csv|json");
      const BenchReport report = run_bench(cfg);
      emit(format == "csv" ? to_csv(report) : dump(to_json(report)), out);
      for (const auto& a : report.aggregates) {
        std::cerr << a.solver << ": mean " << a.mean << ", median " << a.median << ", p90 " << a.p90 << '\n';
      }
      if (!report.all_correct()) {
        std::cerr << "error: some solver returned a wrong answer\n";
        return 1;
      }
    } else if (*adversary) {
      BoundReport report;
      if (family == "matrix") {
        const MatrixGame game = family_matrix_game(k);
        game.relation.validate(game.family.labels);
        report = {"matrix:k=" + std::to_string(k), game.family.size(),
                  variant_bound_exhaustive(game.family, game.relation, workers),
                  aaronson_vmin(game.family, game.relation)};
      } else if (family == "staircase") {
        if (graph_file.empty() || paths_file.empty()) throw ArgumentError("staircase family needs --graph and --paths");
        const Graph g = graph_from_json(read_json_file(graph_file));
        const PathSystem ps = path_system_from_json(read_json_file(paths_file));
        ps.validate(g);
        const StaircaseFamily fam = family_staircase(g, ps, L);
        fam.relation.validate(fam.family.labels);
        report = {"staircase:n=" + std::to_string(g.size()) + ",L=" + std::to_string(L), fam.family.size(),
                  variant_bound_exhaustive(fam.family, fam.relation, workers), aaronson_vmin(fam.family, fam.relation)};
      } else {
        throw ArgumentError("family: expected matrix|staircase");
      }
      emit(dump(to_json(report)), out);
    } else if (*verify) {
      VerifyOptions opt;
      opt.random_instances = budget;
      opt.sampled_subsets = budget;
      if (verify->count("--seed")) opt.seed = seed;
      opt.fault = parse_fault(fault);
      const auto results = run_verify(scope, opt);
      const Json report = to_json(results);
      emit(dump(report), out);
      if (!report["passed"].get<bool>()) return 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
