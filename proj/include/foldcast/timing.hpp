#pragma once

#include <atomic>
#include <chrono>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "foldcast/error.hpp"

namespace foldcast {

struct ColdWarm {
    /// Seconds for the first invocation.
    double cold = 0.0;
    /// Mean seconds over the warm invocations.
    double warm = 0.0;
    std::vector<double> warm_samples;
};

/**
 * Times one cold invocation of `run` followed by `warm_iters` warm ones.
 *
 * Each invocation's result is fully materialized and kept alive until after
 * the stop timestamp, so nothing is deferred past the measurement. Runs on
 * the calling thread with a monotonic clock.
 */
template <class Runnable>
ColdWarm time_cold_warm(Runnable&& run, int warm_iters = 5) {
    if (warm_iters < 1) throw ConfigError("warm_iters must be >= 1");
    using Clock = std::chrono::steady_clock;
    using Result = std::invoke_result_t<Runnable&>;

    auto once = [&] {
        const auto start = Clock::now();
        if constexpr (std::is_void_v<Result>) {
            run();
            std::atomic_signal_fence(std::memory_order_seq_cst);
            return std::chrono::duration<double>(Clock::now() - start).count();
        } else {
            std::optional<std::decay_t<Result>> keep;
            keep.emplace(run());
            std::atomic_signal_fence(std::memory_order_seq_cst);
            return std::chrono::duration<double>(Clock::now() - start).count();
        }
    };

    ColdWarm t;
    t.cold = once();
    t.warm_samples.reserve(static_cast<std::size_t>(warm_iters));
    for (int i = 0; i < warm_iters; ++i) t.warm_samples.push_back(once());
    double sum = 0.0;
    for (double s : t.warm_samples) sum += s;
    t.warm = sum / static_cast<double>(warm_iters);
    return t;
}

}  // namespace foldcast
