#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace crystalfold {

/// Number of worker threads: the CRYSTALFOLD_THREADS environment variable when
/// set to a positive integer, otherwise the hardware concurrency (at least 1).
inline int worker_count() {
    if (const char* env = std::getenv("CRYSTALFOLD_THREADS")) {
        const int value = std::atoi(env);
        if (value > 0) return value;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(i) for every i in [0, count) over contiguous index chunks, one
/// chunk per worker.  The body must only write to disjoint preallocated slots
/// so results are identical for any worker count.  The first exception thrown
/// by a body (lowest chunk wins) is rethrown on the calling thread.
inline void parallel_for(std::ptrdiff_t count, const std::function<void(std::ptrdiff_t)>& body) {
    if (count <= 0) return;
    const int workers = std::min<std::ptrdiff_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    const std::ptrdiff_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::ptrdiff_t begin = static_cast<std::ptrdiff_t>(w) * chunk;
        const std::ptrdiff_t end = std::min(count, begin + chunk);
        pool.emplace_back([&, w, begin, end] {
            try {
                for (std::ptrdiff_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                errors[static_cast<size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
}

}  // namespace crystalfold
