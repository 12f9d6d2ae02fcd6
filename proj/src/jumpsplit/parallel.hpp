#pragma once

// Minimal deterministic work-sharing helper.  Work items write to disjoint
// slots and draw randomness from their own lanes, so results are identical
// for any worker count (including 1).  JUMPSPLIT_THREADS caps the pool.

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace jumpsplit {

inline int max_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("JUMPSPLIT_THREADS")) {
        // Authoritative when set: containers frequently misreport the core
        // count, and determinism tests need to force a worker count above it.
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v < 1024) hw = static_cast<unsigned>(v);
    }
    return static_cast<int>(hw);
}

namespace detail {
// Nested parallel_for calls run inline: outer loops own the worker pool.
inline bool& in_parallel_worker() {
    thread_local bool flag = false;
    return flag;
}
} // namespace detail

// Runs fn(i) for i in [0, n); blocks until done.  Exceptions from workers are
// captured and the first one rethrown on the calling thread.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         int threads = 0) {
    if (threads <= 0) threads = max_threads();
    threads = static_cast<int>(std::min<std::size_t>(threads, n));
    if (threads <= 1 || detail::in_parallel_worker()) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mutex;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::size_t lo = static_cast<std::size_t>(t) * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            detail::in_parallel_worker() = true;
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace jumpsplit
