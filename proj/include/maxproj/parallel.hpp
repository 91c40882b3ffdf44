#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace maxproj {

/// Runs f(i) for i in [0, count) on `workers` threads with static contiguous
/// chunks. Each index must write only its own output slot, so results do not
/// depend on the worker count. The first exception thrown is rethrown.
template <class F>
void parallel_for(std::size_t count, int workers, F&& f) {
    const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1,
                                                  std::max<std::size_t>(count, 1));
    if (w == 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        const std::size_t lo = count * t / w, hi = count * (t + 1) / w;
        threads.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) f(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace maxproj
