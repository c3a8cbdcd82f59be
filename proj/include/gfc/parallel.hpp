#pragma once

// Deterministic index-parallel loop: work items are computed independently
// and written into preassigned slots, so results are identical for any
// thread count.

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace gfc {

inline int& global_thread_count() {
    static int n = 1;
    return n;
}

inline void parallel_for_indexed(std::size_t count, const std::function<void(std::size_t)>& body) {
    const int threads = std::max(1, global_thread_count());
    if (threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int use = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), count));
    pool.reserve(static_cast<std::size_t>(use));
    for (int t = 0; t < use; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    for (auto& th : pool) th.join();
}

} // namespace gfc
