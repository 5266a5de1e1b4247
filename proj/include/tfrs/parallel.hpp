#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace tfrs {

/// Runs body(i) for i in [0, n) on up to `threads` workers over contiguous
/// index chunks. Callers write results keyed by i, so the output does not
/// depend on the thread count. The first exception thrown by any worker is
/// rethrown on the calling thread.
template <typename Body>
void parallel_for(int n, int threads, Body&& body) {
    if (n <= 0) return;
    threads = std::clamp(threads, 1, n);
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(n, lo + chunk);
        pool.emplace_back([&, t, lo, hi] {
            try {
                for (int i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

} // namespace tfrs
