#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace carnot {

// Execution policy for the data-parallel kernels. Every kernel has a serial
// path that performs the identical arithmetic in the identical order; the
// parallel path only distributes independent chunks, so results are
// bit-identical across thread counts. The serial path is the reference the
// tests compare against and the baseline for bench_kernels.
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

namespace detail {

inline std::size_t chunk_count(std::size_t n) {
  // fixed chunking independent of thread count keeps reductions deterministic
  std::size_t c = 256;
  while (c * 4096 < n) c *= 2;
  if (c > n) c = n;
  return c == 0 ? 1 : c;
}

}  // namespace detail

// Deterministic sum of term(i) for i in [0, n): chunk partial sums are taken
// serially within each chunk and combined by a fixed pairwise tree, so the
// result does not depend on how chunks were scheduled.
template <typename Term>
double reduce_sum(std::size_t n, Term&& term, Exec exec) {
  if (n == 0) return 0.0;
  const std::size_t chunks = detail::chunk_count(n);
  std::vector<double> partial(chunks, 0.0);
  const std::size_t step = (n + chunks - 1) / chunks;
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
      const std::size_t lo = static_cast<std::size_t>(c) * step;
      const std::size_t hi = lo + step < n ? lo + step : n;
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += term(i);
      partial[static_cast<std::size_t>(c)] = s;
    }
  } else {
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t lo = c * step;
      const std::size_t hi = lo + step < n ? lo + step : n;
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += term(i);
      partial[c] = s;
    }
  }
  // pairwise tree over chunk sums
  std::size_t m = chunks;
  while (m > 1) {
    std::size_t half = (m + 1) / 2;
    for (std::size_t i = 0; i + half < m; ++i) partial[i] += partial[i + half];
    m = half;
  }
  return partial[0];
}

// Deterministic minimum of value(i) with the smallest attaining index.
template <typename Value>
std::pair<double, std::size_t> reduce_min(std::size_t n, Value&& value, Exec exec) {
  std::pair<double, std::size_t> best{std::numeric_limits<double>::infinity(), 0};
  if (n == 0) return best;
  const std::size_t chunks = detail::chunk_count(n);
  const std::size_t step = (n + chunks - 1) / chunks;
  std::vector<std::pair<double, std::size_t>> partial(
      chunks, {std::numeric_limits<double>::infinity(), 0});
  auto body = [&](std::size_t c) {
    const std::size_t lo = c * step;
    const std::size_t hi = lo + step < n ? lo + step : n;
    auto b = partial[c];
    for (std::size_t i = lo; i < hi; ++i) {
      double v = value(i);
      if (v < b.first) b = {v, i};
    }
    partial[c] = b;
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long c = 0; c < static_cast<long long>(chunks); ++c)
      body(static_cast<std::size_t>(c));
  } else {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
  }
  for (std::size_t c = 0; c < chunks; ++c) {
    if (partial[c].first < best.first) best = partial[c];
  }
  return best;
}

// Parallel loop without a reduction (independent writes).
template <typename Body>
void parallel_for(std::size_t n, Body&& body, Exec exec) {
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
}

}  // namespace carnot
