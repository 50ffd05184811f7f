#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "foldcast/error.hpp"

namespace foldcast {

/// Final carry plus one output per input step.
template <class Carry, class Output>
struct ScanResult {
    Carry final_carry;
    std::vector<Output> outputs;
};

/**
 * Threads `init` through `step` over `inputs`:
 *
 *     (s_t, y_t) = step(s_{t-1}, x_t),   t = 1..T
 *
 * and returns (s_T, [y_1..y_T]). `step` must be pure and return something
 * destructurable as a pair (carry, output).
 *
 * A NumericDomainError thrown by the step is rethrown tagged with the
 * zero-based step index.
 */
template <class Carry, class Input, class Step>
auto scan(Step&& step, Carry init, std::span<const Input> inputs) {
    using StepOut = std::invoke_result_t<Step&, Carry, const Input&>;
    using Output = std::tuple_element_t<1, StepOut>;

    if (inputs.empty()) {
        throw LengthError("scan: input sequence must be nonempty", 1);
    }

    ScanResult<Carry, Output> result{std::move(init), {}};
    result.outputs.reserve(inputs.size());
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        try {
            auto [carry, out] = std::invoke(step, std::move(result.final_carry), inputs[t]);
            result.final_carry = std::move(carry);
            result.outputs.push_back(std::move(out));
        } catch (const NumericDomainError& e) {
            if (e.step() != NumericDomainError::npos) throw;
            throw NumericDomainError(std::string(e.what()) + " (step " + std::to_string(t) + ")", t);
        }
    }
    return result;
}

template <class Carry, class Input, class Step>
auto scan(Step&& step, Carry init, const std::vector<Input>& inputs) {
    return scan(std::forward<Step>(step), std::move(init), std::span<const Input>(inputs));
}

/// Worker count for batch_map. 0 picks the hardware concurrency.
struct BatchOptions {
    std::size_t workers = 0;
};

/**
 * Applies `f` to each element and returns the results in input order.
 *
 * Elements are split into contiguous chunks over the worker threads; the
 * result never depends on the worker count. If any element throws, the
 * lowest failing index is reported as a BatchError with the original
 * exception nested.
 */
template <class T, class F>
auto batch_map(F&& f, std::span<const T> batch, BatchOptions options = {}) {
    using R = std::decay_t<std::invoke_result_t<F&, const T&>>;

    std::vector<std::optional<R>> slots(batch.size());
    std::vector<std::exception_ptr> failures(batch.size());

    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                slots[i].emplace(std::invoke(f, batch[i]));
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    std::size_t workers = options.workers == 0
                              ? std::max<std::size_t>(1, std::thread::hardware_concurrency())
                              : options.workers;
    workers = std::min(workers, batch.size());

    if (workers <= 1) {
        run_range(0, batch.size());
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (batch.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(batch.size(), begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
    }

    for (std::size_t i = 0; i < failures.size(); ++i) {
        if (!failures[i]) continue;
        std::string what = "unknown error";
        try {
            std::rethrow_exception(failures[i]);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        try {
            std::rethrow_exception(failures[i]);
        } catch (...) {
            std::throw_with_nested(BatchError(i, what));
        }
    }

    std::vector<R> out;
    out.reserve(batch.size());
    for (auto& slot : slots) out.push_back(std::move(*slot));
    return out;
}

template <class T, class F>
auto batch_map(F&& f, const std::vector<T>& batch, BatchOptions options = {}) {
    return batch_map(std::forward<F>(f), std::span<const T>(batch), options);
}

}  // namespace foldcast
