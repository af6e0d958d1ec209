#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace semilin {

// Worker count: hardware concurrency, overridden by SEMILIN_THREADS.
inline int max_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    int n = static_cast<int>(hw);
    if (const char* env = std::getenv("SEMILIN_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) n = static_cast<int>(std::min<long>(v, 1024));
    }
    return n;
}

// Runs fn(i) for i in [0, count). Each index writes only its own result
// slot, so thread count never affects the values; callers reduce in index
// order afterwards.
template <class Fn>
void parallel_for(long count, Fn&& fn) {
    long nt = std::min<long>(max_threads(), count);
    if (nt <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(nt));
    for (long t = 0; t < nt; ++t)
        workers.emplace_back([&] {
            for (;;) {
                long i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= count) return;
                fn(i);
            }
        });
    for (auto& w : workers) w.join();
}

}  // namespace semilin
