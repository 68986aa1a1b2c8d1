#include "giant/parallel.hpp"

namespace giant::parallel {

namespace {
#ifdef _OPENMP
const int initial_threads = omp_get_max_threads();
#endif
} // namespace

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n > 0 ? n : initial_threads);
#else
    (void)n;
#endif
}

int threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace giant::parallel
