#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace nullgauge {

// Worker cap from NULLGAUGE_THREADS, else the hardware concurrency.
inline unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("NULLGAUGE_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 1024));
        } catch (...) {
        }
    }
    return hw;
}

// Runs f(begin, end) over contiguous chunks of [0, n). Chunk boundaries depend only on n and the
// worker count, and each index is processed exactly once, so results do not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, F&& f, unsigned workers = worker_count()) {
    workers = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(workers, n)));
    if (workers <= 1) {
        f(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = w * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&f, b, e] { f(b, e); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace nullgauge
