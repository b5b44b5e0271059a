#include "adjsound/parallel.hpp"

#include <omp.h>

namespace adjsound {

namespace {
int g_default_workers = -1;
}

void set_worker_count(int n) {
  if (g_default_workers < 0) g_default_workers = omp_get_max_threads();
  omp_set_num_threads(n > 0 ? n : g_default_workers);
}

int worker_count() { return omp_get_max_threads(); }

int max_worker_count() { return omp_get_num_procs(); }

}  // namespace adjsound
