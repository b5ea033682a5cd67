#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vai {

inline unsigned default_worker_count() noexcept {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Applies fn(i) for i in [0, n) on up to `workers` threads. Results land in
// slot i, so the output never depends on scheduling. The first exception (by
// index) is rethrown after all workers join.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, unsigned workers, Fn&& fn) {
    std::vector<T> out(n);
    if (n == 0) return out;
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::size_t>(n, 1u << 16))));

    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::size_t err_index = n;
    std::exception_ptr err;

    auto run = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(err_mu);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };

    if (workers == 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
        run();
    }
    if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace vai
