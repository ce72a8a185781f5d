#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace igid {

// Number of OpenMP threads parallel kernels will use.
inline int worker_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_worker_count(int workers) {
#ifdef _OPENMP
  if (workers > 0) omp_set_num_threads(workers);
#else
  (void)workers;
#endif
}

// Runs body(i) for i in [0, count) across OpenMP threads. If any iteration
// throws, the exception from the lowest failing index is rethrown after the
// loop, so error reporting is independent of the thread count.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  std::exception_ptr first_error;
  std::size_t first_index = std::numeric_limits<std::size_t>::max();
  std::mutex error_mutex;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (static_cast<std::size_t>(i) < first_index) {
        first_index = static_cast<std::size_t>(i);
        first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace igid
