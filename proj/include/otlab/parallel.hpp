#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace otlab::par {

// Runtime switch between the OpenMP drivers and the serial reference loops.
// Both paths run identical per-element arithmetic, and reductions combine
// fixed-size chunks in index order, so results are byte-identical across
// thread counts. Tests pin this down; bench_kernels times the two paths.

bool enabled();
void set_enabled(bool on);
int max_threads();

inline constexpr std::size_t kParallelGrain = 256;

template <class F>
void for_each_index(std::size_t n, F&& body) {
#ifdef _OPENMP
  if (enabled() && n >= kParallelGrain) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) body(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

struct MinLoc {
  double value = std::numeric_limits<double>::infinity();
  std::size_t index = 0;
};

// Deterministic argmin over [0, n): chunks are scanned serially and merged in
// index order, ties resolved toward the lower index.
template <class F>
MinLoc min_scan(std::size_t n, F&& value_at) {
  constexpr std::size_t chunk = 4096;
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<MinLoc> partial(n_chunks);
  for_each_index(n_chunks, [&](std::size_t c) {
    const std::size_t lo = c * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    MinLoc m;
    m.index = lo;
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = value_at(i);
      if (v < m.value) {
        m.value = v;
        m.index = i;
      }
    }
    partial[c] = m;
  });
  MinLoc best;
  for (const MinLoc& m : partial) {
    if (m.value < best.value) best = m;
  }
  return best;
}

}  // namespace otlab::par
