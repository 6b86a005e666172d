#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace landscape {

/// Worker cap: LANDSCAPE_LAB_THREADS when set, otherwise the hardware
/// concurrency. Always at least one.
inline unsigned thread_cap() {
    unsigned cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LANDSCAPE_LAB_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1) cap = std::min<unsigned>(cap, static_cast<unsigned>(parsed));
    }
    return cap;
}

/// Run fn(0..count-1), possibly concurrently. Each index is handled exactly
/// once; callers must keep per-index work independent so results do not
/// depend on scheduling.
template <typename Fn>
void parallel_for_each(std::size_t count, Fn&& fn) {
    const unsigned workers = std::min<std::size_t>(thread_cap(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace landscape
