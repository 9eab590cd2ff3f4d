#pragma once

#include <cstddef>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace clover::util {

// Runs fn(i) for i in [0, n). With jobs > 1 the loop is parallelized via
// OpenMP; fn must write only to its own index slot so that results do not
// depend on the schedule. jobs <= 1 runs the serial reference path, which
// tests compare against the parallel one.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  if (jobs < 0) throw std::invalid_argument("parallel_for: jobs must be >= 0");
#ifdef _OPENMP
  if (jobs > 1 && n > 1) {
#pragma omp parallel for schedule(static) num_threads(jobs)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      fn(static_cast<std::size_t>(i));
    }
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

inline bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace clover::util
