#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace flowcast {

// Runs fn(i) for i in [0, n) across up to `threads` workers in contiguous
// chunks. Callers write results by index, so output is identical for any
// thread count. fn must not throw (workers run detached from try scopes).
inline void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    size_t workers = std::min(static_cast<size_t>(threads), n);
    size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
        size_t lo = w * chunk;
        size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace flowcast
