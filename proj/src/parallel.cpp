// SPDX-License-Identifier: Apache-2.0

#include "onebit/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace onebit {

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) noexcept {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace onebit
