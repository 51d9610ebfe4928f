#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace qpv::detail {

/// Runs map(i) for i in [0, n) on up to `workers` threads and hands each
/// result to consume(i, result) strictly in ascending i. Tasks are processed
/// in windows so that at most a few results per worker are alive at once.
template <class Map, class Consume>
void ordered_map_consume(std::size_t n, unsigned workers, Map&& map, Consume&& consume) {
    using Result = decltype(map(std::size_t{0}));
    workers = std::max(1u, workers);
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) consume(i, map(i));
        return;
    }
    const std::size_t window = static_cast<std::size_t>(workers) * 4;
    std::vector<std::optional<Result>> slots(window);
    for (std::size_t base = 0; base < n; base += window) {
        const std::size_t count = std::min(window, n - base);
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto run = [&] {
            for (;;) {
                const std::size_t k = next.fetch_add(1);
                if (k >= count) return;
                try {
                    slots[k].emplace(map(base + k));
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        const unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(workers, count));
        for (unsigned t = 1; t < spawn; ++t) pool.emplace_back(run);
        run();
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
        for (std::size_t k = 0; k < count; ++k) {
            consume(base + k, std::move(*slots[k]));
            slots[k].reset();
        }
    }
}

}  // namespace qpv::detail
