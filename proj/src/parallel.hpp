#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace uq::detail {

inline unsigned worker_count(unsigned requested, std::size_t tasks) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

/// Calls fn(k) for k in [0, n) on a small pool. Exceptions are captured per
/// index and returned; the caller decides which one to surface.
template <class Fn>
std::vector<std::exception_ptr> parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                fn(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const unsigned workers = worker_count(threads, n);
    if (workers <= 1) {
        work();
        return errors;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    pool.clear();
    return errors;
}

}  // namespace uq::detail
