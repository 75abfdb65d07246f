#include "diaster/parallel.hpp"

namespace diaster {
namespace {
int g_threads = 0;
}

int max_threads() {
#ifdef _OPENMP
  if (g_threads > 0) return g_threads;
  if (const char* env = std::getenv("DIASTER_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) { g_threads = n < 0 ? 0 : n; }

void parallel_for(long n, bool parallel, const std::function<void(long)>& body) {
#ifdef _OPENMP
  if (parallel && n > 1) {
    const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
#endif
  (void)parallel;
  for (long i = 0; i < n; ++i) body(i);
}

}  // namespace diaster
