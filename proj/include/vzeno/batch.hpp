#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace vzeno {

/// Run `work(index)` for index in [0, n) on a pool of worker threads.
/// Work items must depend only on their index (each derives its own rng
/// stream), so results are identical no matter how the pool schedules them.
/// The first exception thrown by any worker is rethrown on the caller.
inline void run_indexed(std::size_t n, const std::function<void(std::size_t)>& work,
                        unsigned n_threads = 0) {
    if (n == 0) return;
    if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
    if (n_threads == 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto runner = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                work(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(runner);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace vzeno
