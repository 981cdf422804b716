#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace isoprofile {

// Worker count from ISO_THREADS (0 or unset = hardware concurrency).
inline unsigned worker_count() {
    unsigned n = 0;
    if (const char* env = std::getenv("ISO_THREADS")) n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

// Runs body(i) for i in [0, n). Each index is processed exactly once and
// writes only its own outputs, so results never depend on the worker count.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace isoprofile
