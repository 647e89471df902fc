#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bilax {

/// Worker count: BILAX_THREADS if set (must be a positive integer),
/// otherwise the hardware concurrency.
inline int thread_budget() {
    if (const char* env = std::getenv("BILAX_THREADS"); env && *env) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1) throw std::invalid_argument(std::string("BILAX_THREADS must be a positive integer, got ") + env);
        return static_cast<int>(std::min<long>(v, 1024));
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs every task, at most `threads` at a time. Results keep task order.
/// The first exception thrown by a task is rethrown after all workers join.
template <class R>
std::vector<R> parallel_run(const std::vector<std::function<R()>>& tasks, int threads = thread_budget()) {
    std::vector<R> out(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                out[i] = tasks[i]();
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), tasks.size());
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace bilax
