#pragma once

#include "wavelab/error.hpp"

#include <cstdint>
#include <exception>
#include <vector>

#include <omp.h>

namespace wavelab {

/// Runs fn(seed) for seeds base_seed .. base_seed + count - 1 on a work queue
/// of OpenMP threads and returns the results in replicate order. The output
/// does not depend on the worker count. workers <= 0 uses the OpenMP default.
/// The first exception (by replicate index) is rethrown after all workers finish.
template <class Fn>
auto run_replicates(std::size_t count, std::uint64_t base_seed, int workers, Fn&& fn)
    -> std::vector<decltype(fn(std::uint64_t{}))>
{
    using Result = decltype(fn(std::uint64_t{}));
    std::vector<Result> results(count);
    std::vector<std::exception_ptr> errors(count);
    const int threads = workers > 0 ? workers : omp_get_max_threads();
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            results[k] = fn(base_seed + k);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return results;
}

} // namespace wavelab
