#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace treelocal {

// Runs fn(i) for i in [0, count) on a pool of `workers` threads. Each call
// must confine its writes to replica-owned slots; ordering across replicas is
// unspecified, so any aggregation happens after the join, sequentially.
inline void run_replicas(std::uint64_t count, int workers,
                         const std::function<void(std::uint64_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const int nw = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), count));
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace treelocal
