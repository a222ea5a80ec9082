#include "otlab/parallel.hpp"

#include <atomic>

namespace otlab::par {

namespace {
#ifdef _OPENMP
std::atomic<bool> g_enabled{true};
#else
std::atomic<bool> g_enabled{false};
#endif
}  // namespace

bool enabled() { return g_enabled.load(std::memory_order_relaxed); }

void set_enabled(bool on) {
#ifndef _OPENMP
  on = false;
#endif
  g_enabled.store(on, std::memory_order_relaxed);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace otlab::par
