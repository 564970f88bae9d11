#pragma once

// Deterministic fan-out over path indices. Each index is evaluated
// independently (its own RNG stream); results land in an index-ordered
// vector, so any reduction over them is independent of the worker count.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace interface_lab {

/// Worker count from INTERFACE_LAB_THREADS (0 or unset = hardware concurrency).
inline unsigned default_worker_count() {
    unsigned n = 0;
    if (const char* env = std::getenv("INTERFACE_LAB_THREADS")) {
        try {
            n = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            n = 0;
        }
    }
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

template <class Result, class Fn>
std::vector<Result> map_paths(std::size_t count, Fn&& fn, unsigned workers = 0) {
    std::vector<Result> out(count);
    if (workers == 0) workers = default_worker_count();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                const std::size_t begin = count * w / workers;
                const std::size_t end = count * (w + 1) / workers;
                try {
                    for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace interface_lab
