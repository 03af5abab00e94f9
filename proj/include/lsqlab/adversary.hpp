#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lsqlab/core.hpp"
#include "lsqlab/graph.hpp"
#include "lsqlab/path_system.hpp"
#include "lsqlab/staircase.hpp"

namespace lsqlab {

using Subset = std::vector<std::size_t>;

// Finite family of functions over the domain {0, ..., domain_size-1}.
template <typename Value>
struct FunctionFamily {
  std::size_t domain_size = 0;
  std::vector<std::vector<Value>> functions;
  std::vector<int> labels;

  std::size_t size() const { return functions.size(); }

  void validate() const {
    if (labels.size() != functions.size()) throw ValidationError("labels must cover every function");
    for (const auto& f : functions) {
      if (f.size() != domain_size) throw ValidationError("functions must share the domain");
    }
    for (int label : labels) {
      if (label != 0 && label != 1) throw ValidationError("labels must be 0 or 1");
    }
  }
};

class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t size) : size_(size), weights_(size * size) {}

  std::size_t size() const { return size_; }
  const BigNat& operator()(std::size_t i, std::size_t j) const { return weights_[i * size_ + j]; }

  void set(std::size_t i, std::size_t j, const BigNat& w) {
    weights_[i * size_ + j] = w;
    weights_[j * size_ + i] = w;
  }

  // Symmetric, zero on equal labels, nonnegative, not identically zero.
  void validate(const std::vector<int>& labels) const {
    if (labels.size() != size_) throw ValidationError("relation and family sizes differ");
    bool nonzero = false;
    for (std::size_t i = 0; i < size_; ++i) {
      for (std::size_t j = 0; j < size_; ++j) {
        const BigNat& w = (*this)(i, j);
        if (w < 0) throw ValidationError("relation weight is negative");
        if (w != (*this)(j, i)) throw ValidationError("relation is not symmetric");
        if (w != 0) {
          nonzero = true;
          if (labels[i] == labels[j]) {
            throw ValidationError("relation is nonzero on a pair with equal labels (" +
                                  std::to_string(i) + "," + std::to_string(j) + ")");
          }
        }
      }
    }
    if (!nonzero) throw ValidationError("relation is identically zero");
  }

 private:
  std::size_t size_ = 0;
  std::vector<BigNat> weights_;
};

template <typename Value>
BigNat big_m(const FunctionFamily<Value>& fam, const Relation& r, const Subset& z) {
  BigNat total = 0;
  for (std::size_t f1 : z) {
    for (std::size_t f2 = 0; f2 < fam.size(); ++f2) total += r(f1, f2);
  }
  return total;
}

// Maximum over points of the ordered-pair distinguishing mass inside z.
template <typename Value>
BigNat big_q(const FunctionFamily<Value>& fam, const Relation& r, const Subset& z) {
  BigNat best = 0;
  for (std::size_t a = 0; a < fam.domain_size; ++a) {
    BigNat mass = 0;
    for (std::size_t f1 : z) {
      for (std::size_t f2 : z) {
        if (r(f1, f2) != 0 && fam.functions[f1][a] != fam.functions[f2][a]) mass += r(f1, f2);
      }
    }
    best = std::max(best, mass);
  }
  return best;
}

struct VariantBound {
  Rational min_ratio;
  Rational bound;
  Subset argmin;
};

namespace detail {

struct SubsetSearchResult {
  bool found = false;
  BigNat m;
  BigNat q;
  std::uint64_t mask = 0;
};

inline bool better(const BigNat& m1, const BigNat& q1, std::uint64_t mask1, const BigNat& m2,
                   const BigNat& q2, std::uint64_t mask2) {
  const BigNat lhs = m1 * q2;
  const BigNat rhs = m2 * q1;
  return lhs < rhs || (lhs == rhs && mask1 < mask2);
}

}  // namespace detail

// Exact min over Z with q(Z) > 0 of M(Z)/q(Z), divided by 100 for the bound.
// Subsets sharing a fixed pattern of high bits form one chunk; each chunk is
// walked in Gray-code order keeping M and the per-point masses incremental.
// Ties on the ratio go to the numerically smallest subset mask.
template <typename Value>
VariantBound variant_bound_exhaustive(const FunctionFamily<Value>& fam, const Relation& r,
                                      unsigned workers = 1,
                                      std::size_t cap = ExhaustiveCaps::from_env().subset_search) {
  const std::size_t size = fam.size();
  if (size > cap || size > 40) {
    throw CapabilityError("variant_bound_exhaustive over " + std::to_string(size) + " functions", cap);
  }
  const std::size_t points = fam.domain_size;
  std::vector<BigNat> row_mass(size, 0);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) row_mass[i] += r(i, j);
  }
  // partners[i][a] lists (j, weight) with r(i,j) > 0 and F_i(a) != F_j(a).
  std::vector<std::vector<std::vector<std::pair<std::size_t, BigNat>>>> partners(
      size, std::vector<std::vector<std::pair<std::size_t, BigNat>>>(points));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      if (r(i, j) == 0) continue;
      for (std::size_t a = 0; a < points; ++a) {
        if (fam.functions[i][a] != fam.functions[j][a]) partners[i][a].emplace_back(j, r(i, j));
      }
    }
  }

  unsigned high_bits = 0;
  while (high_bits < size && (1u << (high_bits + 1)) <= std::max(1u, workers)) ++high_bits;
  const std::size_t low_bits = size - high_bits;
  const std::uint64_t chunks = std::uint64_t{1} << high_bits;

  auto run_chunk = [&](std::uint64_t prefix) {
    detail::SubsetSearchResult res;
    std::uint64_t mask = prefix << low_bits;
    BigNat m = 0;
    std::vector<BigNat> mass(points, 0);
    auto toggle = [&](std::size_t i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      const bool adding = (mask & bit) == 0;
      if (adding) mask |= bit;
      for (std::size_t a = 0; a < points; ++a) {
        BigNat delta = 0;
        for (const auto& [j, w] : partners[i][a]) {
          if (j != i && (mask & (std::uint64_t{1} << j))) delta += w;
        }
        if (adding) {
          mass[a] += 2 * delta;
        } else {
          mass[a] -= 2 * delta;
        }
      }
      if (adding) {
        m += row_mass[i];
      } else {
        mask &= ~bit;
        m -= row_mass[i];
      }
    };
    for (std::size_t i = low_bits; i < size; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        mask &= ~(std::uint64_t{1} << i);
        toggle(i);
      }
    }
    auto consider = [&]() {
      BigNat q = 0;
      for (const auto& value : mass) q = std::max(q, value);
      if (q == 0) return;
      if (!res.found || detail::better(m, q, mask, res.m, res.q, res.mask)) {
        res.found = true;
        res.m = m;
        res.q = q;
        res.mask = mask;
      }
    };
    consider();
    const std::uint64_t steps = std::uint64_t{1} << low_bits;
    for (std::uint64_t step = 1; step < steps; ++step) {
      toggle(static_cast<std::size_t>(std::countr_zero(step)));
      consider();
    }
    return res;
  };

  std::vector<detail::SubsetSearchResult> results(chunks);
  if (chunks == 1) {
    results[0] = run_chunk(0);
  } else {
    std::vector<std::thread> threads;
    const unsigned count = static_cast<unsigned>(std::min<std::uint64_t>(chunks, std::max(1u, workers)));
    for (unsigned t = 0; t < count; ++t) {
      threads.emplace_back([&, t] {
        for (std::uint64_t c = t; c < chunks; c += count) results[c] = run_chunk(c);
      });
    }
    for (auto& th : threads) th.join();
  }
  detail::SubsetSearchResult best;
  for (const auto& res : results) {
    if (res.found && (!best.found || detail::better(res.m, res.q, res.mask, best.m, best.q, best.mask))) {
      best = res;
    }
  }
  if (!best.found) throw DegenerateRelationError("no subset Z has q(Z) > 0");
  VariantBound out;
  out.min_ratio = Rational(best.m, best.q);
  out.bound = out.min_ratio / 100;
  for (std::size_t i = 0; i < size; ++i) {
    if (best.mask & (std::uint64_t{1} << i)) out.argmin.push_back(i);
  }
  return out;
}

struct AaronsonBound {
  Rational vmin;
  Rational bound;
};

// theta(F, a) = sum over G in `others` with F(a) != G(a) of r(F,G), divided by
// the sum over all G in `others` of r(F,G).
template <typename Value>
AaronsonBound aaronson_vmin(const FunctionFamily<Value>& fam, const Relation& r,
                            const Subset& side_a, const Subset& side_b) {
  auto theta = [&](std::size_t f, std::size_t a, const Subset& others) -> std::optional<Rational> {
    BigNat num = 0;
    BigNat den = 0;
    for (std::size_t g : others) {
      den += r(f, g);
      if (fam.functions[f][a] != fam.functions[g][a]) num += r(f, g);
    }
    if (den == 0) return std::nullopt;
    return Rational(num, den);
  };
  bool visited = false;
  Rational vmin = 0;
  for (std::size_t f1 : side_a) {
    for (std::size_t f2 : side_b) {
      if (r(f1, f2) == 0) continue;
      for (std::size_t a = 0; a < fam.domain_size; ++a) {
        if (fam.functions[f1][a] == fam.functions[f2][a]) continue;
        auto t1 = theta(f1, a, side_b);
        auto t2 = theta(f2, a, side_a);
        if (!t1 || !t2) {
          throw IllPosedRelationError("zero theta denominator at triple (" + std::to_string(f1) +
                                      "," + std::to_string(f2) + "," + std::to_string(a) + ")");
        }
        const Rational value = std::min(*t1, *t2);
        if (!visited || value > vmin) vmin = value;
        visited = true;
      }
    }
  }
  if (!visited) throw DegenerateRelationError("no related pair is distinguished by any point");
  return {vmin, Rational(1) / (5 * vmin)};
}

// Partition by label: side A holds label 0, side B label 1.
template <typename Value>
AaronsonBound aaronson_vmin(const FunctionFamily<Value>& fam, const Relation& r) {
  Subset side_a, side_b;
  for (std::size_t i = 0; i < fam.size(); ++i) (fam.labels[i] == 0 ? side_a : side_b).push_back(i);
  return aaronson_vmin(fam, r, side_a, side_b);
}

struct MatrixGame {
  FunctionFamily<int> family;
  Relation relation;
  int k = 0;
};

// Rows first (label 0, a row of 1s), then columns (label 1, a column of 2s).
// Cell (i, j), 0-based, is domain point i*k + j.
inline MatrixGame family_matrix_game(int k) {
  if (k < 2) throw ArgumentError("matrix game needs k >= 2");
  MatrixGame game;
  game.k = k;
  game.family.domain_size = static_cast<std::size_t>(k) * k;
  for (int i = 0; i < k; ++i) {
    std::vector<int> cells(game.family.domain_size, 0);
    for (int j = 0; j < k; ++j) cells[i * k + j] = 1;
    game.family.functions.push_back(std::move(cells));
    game.family.labels.push_back(0);
  }
  for (int j = 0; j < k; ++j) {
    std::vector<int> cells(game.family.domain_size, 0);
    for (int i = 0; i < k; ++i) cells[i * k + j] = 2;
    game.family.functions.push_back(std::move(cells));
    game.family.labels.push_back(1);
  }
  game.relation = Relation(game.family.size());
  for (std::size_t a = 0; a < game.family.size(); ++a) {
    for (std::size_t b = 0; b < game.family.size(); ++b) {
      if (game.family.labels[a] != game.family.labels[b]) game.relation.set(a, b, 1);
    }
  }
  return game;
}

struct DiagonalAnswer {
  int label = 0;
  int queries = 0;
};

// Reads cells (1,1), (2,2), ... until a 1 (row) or a 2 (column) appears.
// Cells are addressed 1-based here.
inline DiagonalAnswer matrix_game_diagonal_solver(const std::function<int(int, int)>& oracle, int k) {
  for (int i = 1; i <= k; ++i) {
    const int value = oracle(i, i);
    if (value == 1) return {0, i};
    if (value == 2) return {1, i};
  }
  throw OracleCorruptionError("diagonal holds no 1 and no 2");
}

struct StaircaseFamily {
  FunctionFamily<Reading> family;
  Relation relation;
  std::vector<StaircaseFunction> members;
};

// Every x in {1} x [n]^L with both bits, x in lexicographic order and bit
// innermost. Domain point a is vertex a+1.
inline StaircaseFamily family_staircase(const Graph& g, const PathSystem& ps, int L,
                                        std::size_t cap = ExhaustiveCaps::from_env().family_size) {
  const int n = g.size();
  if (L < 1) throw ArgumentError("staircase family needs L >= 1");
  long double planned = 2;
  for (int i = 0; i < L; ++i) planned *= n;
  if (planned > static_cast<long double>(cap)) {
    throw CapabilityError("staircase family of size 2*" + std::to_string(n) + "^" +
                              std::to_string(L),
                          cap);
  }
  const auto dist = bfs_distances(g, 1);
  StaircaseFamily out;
  out.family.domain_size = static_cast<std::size_t>(n);
  std::vector<Vertex> xs(static_cast<std::size_t>(L) + 1, 1);
  while (true) {
    MilestoneSequence x(xs);
    for (int b = 0; b <= 1; ++b) {
      StaircaseFunction f = make_staircase_function(x, b, ps, g, dist);
      std::vector<Reading> readings;
      readings.reserve(static_cast<std::size_t>(n));
      for (Vertex v = 1; v <= n; ++v) readings.push_back(f.g(v));
      out.family.functions.push_back(std::move(readings));
      out.family.labels.push_back(b);
      out.members.push_back(std::move(f));
    }
    int pos = L;
    while (pos >= 1 && xs[pos] == n) xs[pos--] = 1;
    if (pos < 1) break;
    ++xs[pos];
  }
  out.relation = Relation(out.members.size());
  for (std::size_t i = 0; i < out.members.size(); ++i) {
    for (std::size_t j = i + 1; j < out.members.size(); ++j) {
      const auto& a = out.members[i];
      const auto& b = out.members[j];
      out.relation.set(i, j, relation_congestion(a.x, a.bit, b.x, b.bit, n));
    }
  }
  return out;
}

}  // namespace lsqlab
