#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lsqlab {

// Vertices are 1-indexed throughout; vertex 1 is the staircase entrance.
using Vertex = int;

using BigNat = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigNat big_pow(std::int64_t base, unsigned exponent) {
  return boost::multiprecision::pow(BigNat(base), exponent);
}

// Renders as "p/q", always including the denominator.
inline std::string rational_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class CapabilityError : public Error {
 public:
  CapabilityError(const std::string& what, std::size_t cap)
      : Error(what + " (exhaustive cap " + std::to_string(cap) +
              ", override with LSQLAB_MAX_EXHAUSTIVE)"),
        cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

class DegenerateRelationError : public Error {
 public:
  using Error::Error;
};

class IllPosedRelationError : public Error {
 public:
  using Error::Error;
};

class InnerSolverError : public Error {
 public:
  using Error::Error;
};

class OracleCorruptionError : public Error {
 public:
  using Error::Error;
};

// Per-vertex storage addressed by 1-based vertex ids.
template <typename T>
class VertexMap {
 public:
  VertexMap() = default;
  explicit VertexMap(int n, const T& init = T{}) : data_(static_cast<std::size_t>(n), init) {}
  explicit VertexMap(std::vector<T> values) : data_(std::move(values)) {}

  T& operator[](Vertex v) { return data_[static_cast<std::size_t>(v - 1)]; }
  const T& operator[](Vertex v) const { return data_[static_cast<std::size_t>(v - 1)]; }

  int size() const { return static_cast<int>(data_.size()); }
  const std::vector<T>& values() const { return data_; }

  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  friend bool operator==(const VertexMap&, const VertexMap&) = default;

 private:
  std::vector<T> data_;
};

// Brute-force enumeration caps. Each can be overridden at once through the
// LSQLAB_MAX_EXHAUSTIVE environment variable, which replaces every cap.
struct ExhaustiveCaps {
  std::size_t expansion = 20;
  std::size_t separation = 14;
  std::size_t congestion_oracle = 6;
  std::size_t subset_search = 16;
  std::size_t family_size = 10000;

  static ExhaustiveCaps from_env() {
    ExhaustiveCaps caps;
    if (const char* raw = std::getenv("LSQLAB_MAX_EXHAUSTIVE")) {
      char* end = nullptr;
      unsigned long long value = std::strtoull(raw, &end, 10);
      if (end != raw && *end == '\0' && value > 0) {
        caps.expansion = caps.separation = caps.congestion_oracle = caps.subset_search =
            caps.family_size = static_cast<std::size_t>(value);
      }
    }
    return caps;
  }
};

}  // namespace lsqlab
