#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace vpbgk::par {

// Deterministic block-parallel loop. Work is split into fixed-size blocks
// whose layout depends only on (n, block_size), never on the thread count.
// Reductions built on top of this must combine per-block partials in block
// order; then the result is identical for 1 or 64 threads.

inline constexpr std::size_t kDefaultBlock = 32768;

inline unsigned hardware_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

inline std::size_t block_count(std::size_t n, std::size_t block = kDefaultBlock) {
    return n == 0 ? 0 : (n + block - 1) / block;
}

// fn(block_index, begin, end) is called once per block; blocks are disjoint.
template <typename Fn>
void for_blocks(std::size_t n, Fn&& fn, unsigned threads = 0, std::size_t block = kDefaultBlock) {
    const std::size_t nb = block_count(n, block);
    if (nb == 0) return;
    if (threads == 0) threads = hardware_threads();
    if (threads <= 1 || nb == 1) {
        for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t lo = b * block;
            fn(b, lo, std::min(lo + block, n));
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= nb) return;
            const std::size_t lo = b * block;
            fn(b, lo, std::min(lo + block, n));
        }
    };
    std::vector<std::thread> pool;
    const unsigned nt = static_cast<unsigned>(std::min<std::size_t>(threads, nb));
    pool.reserve(nt - 1);
    for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

// Compensated (Kahan) accumulator. Used for whole-ensemble reductions so the
// blocked parallel sum agrees with a sequential two-pass reference to the
// last few ulps regardless of block layout.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    void merge(const KahanSum& other) {
        add(other.sum);
        add(-other.carry);
    }
    double value() const { return sum; }
};

} // namespace vpbgk::par
