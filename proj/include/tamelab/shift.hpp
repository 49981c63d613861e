#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace tamelab {

// Inclusive shift window on Z.
struct ShiftRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;

    std::int64_t count() const { return hi - lo + 1; }
    static ShiftRange symmetric(std::int64_t m) { return {-m, m}; }
    static ShiftRange forward(std::int64_t m) { return {0, m}; }
};

// Axis-aligned box of lattice shifts centered at the origin: the canonical
// Folner-style window for Z^k budgets.
struct LatticeBox {
    std::vector<std::int64_t> radii;

    std::int64_t count() const {
        std::int64_t c = 1;
        for (auto r : radii) c *= 2 * r + 1;
        return c;
    }
};

// Splits [lo, hi] into roughly equal chunks and runs fn(chunk_index, lo, hi)
// on each, using up to `workers` threads. Chunk boundaries depend only on the
// range and worker count, and callers merge chunk results with
// order-independent operations, so outputs never depend on scheduling.
inline void for_chunks(std::int64_t lo, std::int64_t hi, int workers,
                       const std::function<void(int, std::int64_t, std::int64_t)>& fn) {
    if (workers < 1) workers = 1;
    std::int64_t total = hi - lo + 1;
    if (total <= 0) return;
    int chunks = workers;
    if (total < chunks) chunks = static_cast<int>(total);
    if (chunks == 1) {
        fn(0, lo, hi);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(chunks));
    std::int64_t base = total / chunks, rem = total % chunks;
    std::int64_t start = lo;
    for (int i = 0; i < chunks; ++i) {
        std::int64_t len = base + (i < rem ? 1 : 0);
        std::int64_t a = start, b = start + len - 1;
        start += len;
        pool.emplace_back([i, a, b, &fn] { fn(i, a, b); });
    }
    for (auto& t : pool) t.join();
}

} // namespace tamelab
