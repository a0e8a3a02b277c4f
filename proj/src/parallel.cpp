#include "bma/parallel.hpp"

#include <omp.h>

namespace bma {

void set_thread_count(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace bma
