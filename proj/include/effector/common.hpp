#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace effector {

using NodeId = int;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Multiplies a weight coefficient with a possibly-infinite value.
// A zero coefficient annihilates +inf (0 * inf would be NaN otherwise),
// which is required for the lambda = 0 and lambda = 1 objective collapses.
inline double wmul(double coeff, double x) {
  if (coeff == 0.0) return 0.0;
  return coeff * x;
}

// Thrown on malformed input files.
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
        line(line_) {}
};

// Thrown on structurally invalid data (unknown node ids, cyclic DAG input, ...).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Deterministic seed derivation. All randomized components draw their streams
// from (master seed, index) so that parallel and serial runs agree.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// Uniform double in [0, 1) from 64 random bits.
inline double u01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Static-chunked parallel map over [0, n). Each index is processed exactly
// once; callers must only write to disjoint slots. Falls back to a serial
// loop for small ranges.

template <typename F>
void parallel_for(std::size_t n, F&& body, std::size_t grain = 1) {
  std::size_t hw = std::thread::hardware_concurrency();
  if (hw < 2 || n <= grain) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::size_t nthreads = std::min(hw, (n + grain - 1) / grain);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += nthreads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace effector
