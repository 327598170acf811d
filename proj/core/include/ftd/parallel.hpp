#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ftd
{
    /// Runs body(i) for i in [0, count) on up to `threads` workers. Callers write results into
    /// per-index slots so the outcome never depends on scheduling. The first exception is rethrown.
    template <typename Body>
    void parallel_for(std::size_t count, int threads, Body &&body)
    {
        std::size_t workers = std::clamp<std::size_t>(threads <= 0 ? 1 : static_cast<std::size_t>(threads), 1, std::max<std::size_t>(count, 1));
        if (workers == 1) {
            for (std::size_t i = 0; i < count; ++i)
                body(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto run = [&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                }
                catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (! failure)
                        failure = std::current_exception();
                    next = count;
                }
            }
        };

        std::vector<std::thread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w)
            pool.emplace_back(run);
        run();
        for (auto &t : pool)
            t.join();
        if (failure)
            std::rethrow_exception(failure);
    }

    /// Splits [0, count) into a fixed number of contiguous chunks, independent of thread count.
    struct ChunkRange
    {
        std::size_t begin;
        std::size_t end;
    };

    inline std::vector<ChunkRange> fixed_chunks(std::size_t count, std::size_t chunks = 32)
    {
        std::vector<ChunkRange> out;
        chunks = std::max<std::size_t>(1, std::min(chunks, count));
        for (std::size_t c = 0; c < chunks; ++c)
            out.push_back({count * c / chunks, count * (c + 1) / chunks});
        return out;
    }
}
