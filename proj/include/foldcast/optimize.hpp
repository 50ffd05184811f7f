#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "foldcast/dual.hpp"
#include "foldcast/error.hpp"

namespace foldcast {

/// Largest parameter vector grad() and minimize() accept.
inline constexpr std::size_t kMaxParams = 6;

struct GradResult {
    double value = 0.0;
    std::vector<double> gradient;
};

struct Bound {
    double lo;
    double hi;
};

namespace detail {

template <std::size_t N, class Objective>
GradResult grad_fixed(Objective& objective, std::span<const double> params) {
    std::array<Dual<N>, N> x;
    for (std::size_t i = 0; i < N; ++i) x[i] = Dual<N>::variable(params[i], i);
    const Dual<N> y = objective(std::span<const Dual<N>>(x));

    GradResult r{y.value(), std::vector<double>(y.tangents().begin(), y.tangents().end())};
    if (!std::isfinite(r.value)) {
        // An infinite partial marks the parameter at the singularity; NaN
        // partials can also come from 0/0 on parameters that are not involved.
        std::size_t index = EvaluationError::npos;
        for (std::size_t i = 0; i < N && index == EvaluationError::npos; ++i) {
            if (std::isinf(r.gradient[i])) index = i;
        }
        for (std::size_t i = 0; i < N && index == EvaluationError::npos; ++i) {
            if (std::isnan(r.gradient[i])) index = i;
        }
        throw EvaluationError("objective is not finite at the given parameters", index);
    }
    return r;
}

}  // namespace detail

/**
 * Value and exact gradient of `objective` at `params` by forward-mode
 * differentiation.
 *
 * `objective` must be generic over the scalar type: it is invoked with a
 * `std::span<const Dual<N>>` where N = params.size().
 */
template <class Objective>
GradResult grad(Objective&& objective, std::span<const double> params) {
    switch (params.size()) {
        case 1: return detail::grad_fixed<1>(objective, params);
        case 2: return detail::grad_fixed<2>(objective, params);
        case 3: return detail::grad_fixed<3>(objective, params);
        case 4: return detail::grad_fixed<4>(objective, params);
        case 5: return detail::grad_fixed<5>(objective, params);
        case 6: return detail::grad_fixed<6>(objective, params);
        default:
            throw ConfigError("grad: parameter vector must have 1.." + std::to_string(kMaxParams) +
                              " entries, got " + std::to_string(params.size()));
    }
}

template <class Objective>
GradResult grad(Objective&& objective, const std::vector<double>& params) {
    return grad(std::forward<Objective>(objective), std::span<const double>(params));
}

struct MinimizeOptions {
    int max_iterations = 500;
    double gradient_tolerance = 1e-6;
    double min_step = 1e-10;
    /// Objective values below this are treated as unbounded descent.
    double divergence_floor = -1e12;
    /// Sufficient-decrease constant of the backtracking line search.
    double armijo = 1e-4;
    /// Extra feasibility map applied after clipping to the box (e.g. a+b<1).
    std::function<void(std::vector<double>&)> project;
};

struct Minimum {
    std::vector<double> params;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/**
 * Projected gradient descent with backtracking line search.
 *
 * Every iterate is clipped into `bounds` (then passed through
 * `options.project`, if set). Stops when the projected-gradient step
 * x - P(x - g) has infinity norm below the tolerance, when the line search
 * step falls under `min_step`, or after `max_iterations`. Only accepted
 * steps that decrease the objective move the iterate, so the returned value
 * never exceeds the value at `init`.
 */
template <class Objective>
Minimum minimize(Objective&& objective, std::vector<double> init, std::span<const Bound> bounds,
                 const MinimizeOptions& options = {}) {
    if (init.size() != bounds.size()) {
        throw ConfigError("minimize: init and bounds differ in length");
    }
    for (std::size_t i = 0; i < init.size(); ++i) {
        if (!(bounds[i].lo <= init[i] && init[i] <= bounds[i].hi)) {
            throw ConfigError("minimize: init[" + std::to_string(i) + "] outside bounds");
        }
    }

    auto project = [&](std::vector<double>& x) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], bounds[i].lo, bounds[i].hi);
        if (options.project) options.project(x);
    };
    auto value_at = [&](const std::vector<double>& x) {
        return objective(std::span<const double>(x));
    };
    auto check_floor = [&](double v) {
        if (v < options.divergence_floor) {
            throw DivergenceError("minimize: objective fell below the divergence floor (" +
                                  std::to_string(v) + ")");
        }
    };

    Minimum m;
    m.params = std::move(init);
    GradResult g = grad(objective, std::span<const double>(m.params));
    m.value = g.value;
    check_floor(m.value);

    double step = 1.0;
    std::vector<double> candidate(m.params.size());
    for (; m.iterations < options.max_iterations; ++m.iterations) {
        // Projected-gradient stationarity measure.
        candidate = m.params;
        for (std::size_t i = 0; i < candidate.size(); ++i) candidate[i] -= g.gradient[i];
        project(candidate);
        double pg = 0.0;
        for (std::size_t i = 0; i < candidate.size(); ++i) pg = std::max(pg, std::abs(m.params[i] - candidate[i]));
        if (pg < options.gradient_tolerance) {
            m.converged = true;
            break;
        }

        bool accepted = false;
        while (step >= options.min_step) {
            for (std::size_t i = 0; i < candidate.size(); ++i) candidate[i] = m.params[i] - step * g.gradient[i];
            project(candidate);
            double decrease = 0.0;
            for (std::size_t i = 0; i < candidate.size(); ++i) decrease += g.gradient[i] * (m.params[i] - candidate[i]);
            const double v = value_at(candidate);
            if (std::isfinite(v) && v <= m.value - options.armijo * decrease && v <= m.value) {
                check_floor(v);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            m.converged = true;
            break;
        }
        m.params = candidate;
        g = grad(objective, std::span<const double>(m.params));
        m.value = g.value;
        step = std::min(step * 2.0, 1e12);
    }
    return m;
}

template <class Objective>
Minimum minimize(Objective&& objective, std::vector<double> init, const std::vector<Bound>& bounds,
                 const MinimizeOptions& options = {}) {
    return minimize(std::forward<Objective>(objective), std::move(init), std::span<const Bound>(bounds), options);
}

}  // namespace foldcast
