#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lsqlab/core.hpp"
#include "lsqlab/graph.hpp"
#include "lsqlab/random.hpp"
#include "lsqlab/staircase.hpp"

namespace lsqlab {

struct QueryRecord {
  Vertex vertex = 0;
  std::int64_t value = 0;
  int flag = -1;

  friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

// Memoizing, counting oracle over a hidden-bit function. Plain value functions
// are served with flag -1 everywhere. Single owner; not thread-safe.
class QueryOracle {
 public:
  explicit QueryOracle(HiddenBitFunction target)
      : target_(std::move(target)), answered_(static_cast<std::size_t>(target_.size()) + 1, false) {}

  explicit QueryOracle(const ValueFunction& f)
      : QueryOracle(HiddenBitFunction{f, VertexMap<int>(f.size(), -1), 0}) {}

  Reading query(Vertex v) {
    if (v < 1 || v > target_.size()) throw ArgumentError("query vertex out of range");
    ++raw_calls_;
    const Reading answer = target_(v);
    if (!answered_[v]) {
      answered_[v] = true;
      transcript_.push_back({v, answer.first, answer.second});
    }
    return answer;
  }

  std::int64_t value(Vertex v) { return query(v).first; }

  int size() const { return target_.size(); }
  // Distinct vertices queried so far.
  int count() const { return static_cast<int>(transcript_.size()); }
  long long raw_calls() const { return raw_calls_; }
  const std::vector<QueryRecord>& transcript() const { return transcript_; }

 private:
  HiddenBitFunction target_;
  std::vector<bool> answered_;
  std::vector<QueryRecord> transcript_;
  long long raw_calls_ = 0;
};

struct SolverResult {
  Vertex vertex = 0;
  std::optional<int> bit;
  int queries = 0;
  long long raw_calls = 0;
  int steps = 0;
  // Vertices visited by the descent, starting point first.
  std::vector<Vertex> moves;
};

inline SolverResult steepest_descent(const Graph& g, QueryOracle& o, Vertex start) {
  if (start < 1 || start > g.size()) throw ArgumentError("descent start out of range");
  SolverResult res;
  Vertex cur = start;
  std::int64_t cur_value = o.value(cur);
  res.moves.push_back(cur);
  while (true) {
    Vertex best = 0;
    std::int64_t best_value = 0;
    for (Vertex w : g.neighbors(cur)) {
      const std::int64_t value = o.value(w);
      if (best == 0 || value < best_value) {
        best = w;
        best_value = value;
      }
    }
    if (best == 0 || best_value >= cur_value) break;
    cur = best;
    cur_value = best_value;
    res.moves.push_back(cur);
    ++res.steps;
  }
  res.vertex = cur;
  res.queries = o.count();
  res.raw_calls = o.raw_calls();
  return res;
}

// ceil(sqrt(n * delta)).
inline int auto_warm_start_samples(const Graph& g) {
  const long long target = static_cast<long long>(g.size()) * g.max_degree();
  long long t = 0;
  while (t * t < target) ++t;
  return static_cast<int>(std::max(1LL, t));
}

// Draws t vertices uniformly with replacement, then descends from the best
// sample (lowest id among equal values).
inline SolverResult warm_start_descent(const Graph& g, QueryOracle& o, int t, std::uint64_t seed) {
  if (t < 1) throw ArgumentError("warm start needs t >= 1");
  Rng rng(seed);
  Vertex best = 0;
  std::int64_t best_value = 0;
  for (int i = 0; i < t; ++i) {
    const Vertex v = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(g.size()))) + 1;
    const std::int64_t value = o.value(v);
    if (best == 0 || value < best_value || (value == best_value && v < best)) {
      best = v;
      best_value = value;
    }
  }
  return steepest_descent(g, o, best);
}

using InnerSolver = std::function<SolverResult(const Graph&, QueryOracle&)>;

// Runs the search solver, then reads the flag at the vertex it returned.
inline SolverResult solve_decision(const Graph& g, QueryOracle& o, const InnerSolver& inner) {
  SolverResult res = inner(g, o);
  const int flag = o.query(res.vertex).second;
  if (flag == -1) {
    throw InnerSolverError("inner solver returned vertex " + std::to_string(res.vertex) +
                           ", which carries no hidden bit");
  }
  res.bit = flag;
  res.queries = o.count();
  res.raw_calls = o.raw_calls();
  return res;
}

// Queries every vertex and returns all local minima.
inline std::vector<Vertex> brute_force_min(const Graph& g, QueryOracle& o) {
  ValueFunction f(g.size(), 0);
  for (Vertex v = 1; v <= g.size(); ++v) f[v] = o.value(v);
  return local_minima(g, f);
}

}  // namespace lsqlab
