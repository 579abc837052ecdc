#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace tcsurv {

// Runs fn(0..n_tasks-1) on up to `jobs` worker threads pulling from a
// shared counter. Callers index their outputs by task id, so results do
// not depend on the worker count. The first exception is rethrown after
// all workers stop.
inline void parallel_for(std::size_t n_tasks, int jobs,
                         const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n_tasks <= 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), n_tasks);
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_tasks) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (std::size_t k = 0; k < n_workers; ++k) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace tcsurv
