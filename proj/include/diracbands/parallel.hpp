#pragma once

#include <cstdint>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace diracbands {

// Runs f(i) for i in [0, n) across OpenMP threads. Iterations must be
// independent and write only caller-owned slots, so the result is identical
// for any worker count. If iterations throw, the lowest-index exception is
// rethrown after the loop.
template <class F>
void parallel_for(std::int64_t n, F&& f) {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n > 0 ? n : 0));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            f(i);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// Caps the OpenMP worker count; values below 1 are ignored.
inline void set_thread_cap(int threads) {
#ifdef _OPENMP
    if (threads >= 1) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

}  // namespace diracbands
