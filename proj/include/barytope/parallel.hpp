#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace bary {

/// Run fn(i) for i in [0, count). Each index must be an independent pure job
/// writing only to its own output slot; results are then identical for any
/// thread count, which is what the determinism contract relies on.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        constexpr std::size_t block = 64;
        for (;;) {
            const std::size_t begin = next.fetch_add(block);
            if (begin >= count) return;
            const std::size_t end = std::min(begin + block, count);
            for (std::size_t i = begin; i < end; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int n_workers = std::min<int>(threads, static_cast<int>((count + 63) / 64));
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace bary
