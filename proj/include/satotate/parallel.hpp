#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace satotate {

/// Runs body(i) for every i in [0, n) on `workers` threads. Work is handed
/// out in fixed-size blocks from a shared counter; callers write results by
/// index and reduce afterwards in index order, which makes every result
/// independent of the worker count.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t block = std::max<std::size_t>(1, n / (16 * workers));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        try {
            for (;;) {
                const std::size_t lo = next.fetch_add(block);
                if (lo >= n) return;
                const std::size_t hi = std::min(n, lo + block);
                for (std::size_t i = lo; i < hi; ++i) body(i);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(n);
        }
    };
    std::vector<std::jthread> pool;
    const unsigned spawned = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    pool.reserve(spawned);
    for (unsigned w = 0; w < spawned; ++w) pool.emplace_back(run);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace satotate
