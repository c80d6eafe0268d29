#pragma once

// Deterministic work splitting: [0, total) is cut into contiguous blocks whose
// boundaries depend only on (total, block_count). Workers claim whole blocks,
// and callers store results into per-block slots, so output is bit-identical
// for any worker count.

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace lmotif {

template <class Fn>
void run_blocks(std::size_t total, std::size_t block_count, unsigned threads, Fn&& fn) {
    if (total == 0) return;
    if (block_count == 0) block_count = 1;
    block_count = std::min(block_count, total);
    const std::size_t base = total / block_count, rem = total % block_count;
    auto bounds = [&](std::size_t b) {
        const std::size_t lo = b * base + std::min(b, rem);
        return std::pair<std::size_t, std::size_t>{lo, lo + base + (b < rem ? 1 : 0)};
    };

    if (threads <= 1 || block_count == 1) {
        for (std::size_t b = 0; b < block_count; ++b) {
            auto [lo, hi] = bounds(b);
            fn(b, lo, hi);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t b = next.fetch_add(1); b < block_count; b = next.fetch_add(1)) {
            try {
                auto [lo, hi] = bounds(b);
                fn(b, lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t workers = std::min<std::size_t>(threads, block_count);
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace lmotif
