#pragma once

#include <cstdlib>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace diaster {

/// Number of worker threads the OpenMP kernels will use.
int max_threads();

/// Override the worker count (0 = library default). Honors the
/// DIASTER_THREADS environment variable when called with 0.
void set_threads(int n);

/// Runs body(i) for i in [0, n). When `parallel` is true the iterations are
/// distributed over OpenMP threads; iterations must be independent. Results
/// written to item-indexed slots are identical for any thread count.
void parallel_for(long n, bool parallel, const std::function<void(long)>& body);

}  // namespace diaster
