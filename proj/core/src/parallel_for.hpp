#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace polya::detail {

// Worker count: hardware concurrency, optionally capped by POLYA_EFRON_THREADS.
inline std::size_t thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t n = hw ? hw : 1;
    if (const char* env = std::getenv("POLYA_EFRON_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && static_cast<std::size_t>(v) < n) {
            n = static_cast<std::size_t>(v);
        }
    }
    return n;
}

// Runs body(0..count-1) across threads. Callers make results deterministic by
// writing into index-addressed slots. The first exception thrown by any body
// is rethrown on the calling thread after all workers join.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(thread_budget(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace polya::detail
