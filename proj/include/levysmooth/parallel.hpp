#pragma once

#include "levysmooth/common.hpp"

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace levysmooth {

// Worker count: LEVYSMOOTH_THREADS if set, hardware concurrency otherwise.
inline int effective_threads() {
    if (const char* env = std::getenv("LEVYSMOOTH_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

// Deterministic block map-reduce over [0, n_items). Items are processed in
// fixed blocks; block results are combined by a pairwise tree that does not
// depend on the thread count, so parallel and serial runs agree bitwise.
template <class Acc, class BlockFn, class MergeFn>
Acc parallel_block_reduce(std::uint64_t n_items, std::uint64_t block_size, BlockFn&& block_fn,
                          MergeFn&& merge, Acc identity = Acc{}) {
    if (n_items == 0) return identity;
    const std::uint64_t n_blocks = (n_items + block_size - 1) / block_size;
    std::vector<Acc> results(n_blocks, identity);
    const int threads = std::min<std::uint64_t>(effective_threads(), n_blocks);
    if (threads <= 1) {
        for (std::uint64_t b = 0; b < n_blocks; ++b)
            results[b] = block_fn(b * block_size, std::min(n_items, (b + 1) * block_size));
    } else {
        std::atomic<std::uint64_t> cursor{0};
        auto worker = [&] {
            for (;;) {
                std::uint64_t b = cursor.fetch_add(1);
                if (b >= n_blocks) return;
                results[b] = block_fn(b * block_size, std::min(n_items, (b + 1) * block_size));
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    // pairwise tree merge, order independent of scheduling
    std::uint64_t width = n_blocks;
    while (width > 1) {
        std::uint64_t half = (width + 1) / 2;
        for (std::uint64_t i = 0; i + half < width; ++i)
            results[i] = merge(results[i], results[i + half]);
        width = half;
    }
    return results[0];
}

// Plain deterministic parallel for over index blocks.
template <class BodyFn>
void parallel_for_blocks(std::uint64_t n_items, std::uint64_t block_size, BodyFn&& body) {
    struct Unit {};
    parallel_block_reduce<Unit>(
        n_items, block_size,
        [&](std::uint64_t begin, std::uint64_t end) {
            body(begin, end);
            return Unit{};
        },
        [](Unit, Unit) { return Unit{}; });
}

}  // namespace levysmooth
