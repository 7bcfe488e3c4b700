#include "fuzzybox/sweep.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fuzzybox::par {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void for_index(std::size_t n, Exec exec, const std::function<void(std::size_t)>& fn) {
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
#ifdef _OPENMP
    const long long m = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < m; ++i) fn(static_cast<std::size_t>(i));
#else
    for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
}

} // namespace fuzzybox::par
