#pragma once

// Intermittent-demand forecasters (Croston, TSB, ADIDA, IMAPA).
//
// These follow the standard literature formulations:
//   Croston: SES over nonzero demand sizes and over inter-demand intervals,
//            forecast z / p.
//   TSB:     SES over demand sizes (on demand periods) and over the demand
//            indicator (every period), forecast prob * size.
//   ADIDA:   sum into non-overlapping blocks, SES on the block totals,
//            spread the forecast uniformly over the block.
//   IMAPA:   mean of ADIDA forecasts over several aggregation levels.
// All forecasts are flat over the horizon.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "foldcast/fold.hpp"
#include "foldcast/models/common.hpp"

namespace foldcast::models {

struct Croston {
    static constexpr std::string_view name = "CrostonClassic";
    double alpha = 0.1;
};

struct Tsb {
    static constexpr std::string_view name = "TSB";
    double alpha_d = 0.2;
    double alpha_p = 0.2;
};

struct Adida {
    static constexpr std::string_view name = "ADIDA";
    /// Block size; defaults to the mean inter-demand interval rounded up.
    std::optional<int> aggregation_level;
    double alpha = 0.1;
};

struct Imapa {
    static constexpr std::string_view name = "IMAPA";
    /// Aggregation levels to average; defaults to 1..round(mean interval).
    std::vector<int> levels;
    double alpha = 0.1;
};

struct IntermittentState {
    double demand_level = 0.0;
    /// Croston only; >= 1 once set.
    double interval_level = 1.0;
    /// TSB only; in [0, 1].
    double probability_level = 0.0;
    /// Periods elapsed since the last demand, counting the current one.
    std::size_t since_demand = 0;
    std::size_t demands = 0;
    double alpha = 0.1;
    double alpha_p = 0.0;
};

struct IntermittentFit {
    double forecast = 0.0;
    IntermittentState state;
    std::vector<double> fitted;
};

namespace detail {

inline void require_demand_series(std::span<const double> y, std::string_view model) {
    require_length(y, 1, model);
    require_finite(y, model);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0.0) throw DataError(std::string(model) + ": negative demand at index " + std::to_string(i));
    }
}

inline void check_weight(double a, std::string_view what) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError(std::string(what) + " must lie in [0, 1]");
}

inline bool all_zero(std::span<const double> y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; });
}

}  // namespace detail

/// Gaps between consecutive demands; a lone demand contributes its
/// position counted from the start of the series.
inline std::vector<double> demand_intervals(std::span<const double> y) {
    std::vector<double> pos;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 0.0) pos.push_back(static_cast<double>(i + 1));
    }
    if (pos.size() <= 1) return pos;
    std::vector<double> gaps(pos.size() - 1);
    for (std::size_t i = 1; i < pos.size(); ++i) gaps[i - 1] = pos[i] - pos[i - 1];
    return gaps;
}

inline double mean_demand_interval(std::span<const double> y) {
    auto gaps = demand_intervals(y);
    if (gaps.empty()) return 1.0;
    return mean_of(gaps);
}

/// Croston fold step. Output is the one-step forecast made before seeing y.
///
/// The first demand seeds the size and provisionally the interval (its
/// position); the second demand replaces the provisional interval with the
/// first observed gap; later demands update both by SES.
inline std::pair<IntermittentState, double> croston_step(IntermittentState s, double y) {
    ++s.since_demand;
    const double yhat = s.demands > 0 ? s.demand_level / s.interval_level : 0.0;
    if (y != 0.0) {
        const auto gap = static_cast<double>(s.since_demand);
        if (s.demands == 0) {
            s.demand_level = y;
            s.interval_level = gap;
        } else if (s.demands == 1) {
            s.demand_level += s.alpha * (y - s.demand_level);
            s.interval_level = gap;
        } else {
            s.demand_level += s.alpha * (y - s.demand_level);
            s.interval_level += s.alpha * (gap - s.interval_level);
        }
        ++s.demands;
        s.since_demand = 0;
    }
    return {s, yhat};
}

/// TSB fold step. Probability updates every period, size only on demand.
inline std::pair<IntermittentState, double> tsb_step(IntermittentState s, double y) {
    const double yhat = s.probability_level * s.demand_level;
    const double occurred = y != 0.0 ? 1.0 : 0.0;
    s.probability_level += s.alpha_p * (occurred - s.probability_level);
    if (y != 0.0) s.demand_level += s.alpha * (y - s.demand_level);
    return {s, yhat};
}

/// Plain SES level: seeded with the first value and updated with every value.
inline double ses_level(std::span<const double> x, double alpha) {
    auto step = [alpha](double level, double v) { return std::pair{level + alpha * (v - level), level}; };
    return scan(step, x.front(), x).final_carry;
}

inline IntermittentFit fit_croston(std::span<const double> y, double alpha) {
    detail::require_demand_series(y, Croston::name);
    detail::check_weight(alpha, "alpha");
    IntermittentState init;
    init.alpha = alpha;
    auto run = scan(croston_step, init, y);
    IntermittentFit f{0.0, run.final_carry, std::move(run.outputs)};
    if (f.state.demands > 0) f.forecast = f.state.demand_level / f.state.interval_level;
    return f;
}

inline IntermittentFit fit_tsb(std::span<const double> y, double alpha_d, double alpha_p) {
    detail::require_demand_series(y, Tsb::name);
    detail::check_weight(alpha_d, "alpha_d");
    detail::check_weight(alpha_p, "alpha_p");
    IntermittentState init;
    init.alpha = alpha_d;
    init.alpha_p = alpha_p;
    if (detail::all_zero(y)) {
        return {0.0, init, std::vector<double>(y.size(), 0.0)};
    }
    init.demand_level = *std::find_if(y.begin(), y.end(), [](double v) { return v != 0.0; });
    init.probability_level = y.front() != 0.0 ? 1.0 : 0.0;
    auto run = scan(tsb_step, init, y);
    IntermittentFit f{0.0, run.final_carry, std::move(run.outputs)};
    f.forecast = f.state.probability_level * f.state.demand_level;
    return f;
}

/// Per-period ADIDA forecast at block size `level`. Incomplete leading
/// observations are dropped so the blocks end at the last observation.
inline double adida_rate(std::span<const double> y, int level, double alpha) {
    if (detail::all_zero(y)) return 0.0;
    auto k = std::min<std::size_t>(static_cast<std::size_t>(std::max(level, 1)), y.size());
    const std::size_t blocks = y.size() / k;
    const std::size_t start = y.size() - blocks * k;
    std::vector<double> totals(blocks, 0.0);
    for (std::size_t i = start; i < y.size(); ++i) totals[(i - start) / k] += y[i];
    return ses_level(totals, alpha) / static_cast<double>(k);
}

inline int default_aggregation(std::span<const double> y) {
    return std::max(1, static_cast<int>(std::ceil(mean_demand_interval(y))));
}

inline std::vector<int> default_imapa_levels(std::span<const double> y) {
    const int top = std::max(1, static_cast<int>(std::lround(mean_demand_interval(y))));
    std::vector<int> levels(static_cast<std::size_t>(top));
    for (int i = 0; i < top; ++i) levels[static_cast<std::size_t>(i)] = i + 1;
    return levels;
}

inline IntermittentFit fit_adida(std::span<const double> y, std::optional<int> level, double alpha) {
    detail::require_demand_series(y, Adida::name);
    detail::check_weight(alpha, "alpha");
    if (level && *level < 1) throw ConfigError("ADIDA aggregation level must be >= 1");
    IntermittentFit f;
    f.state.alpha = alpha;
    f.forecast = adida_rate(y, level.value_or(default_aggregation(y)), alpha);
    return f;
}

inline IntermittentFit fit_imapa(std::span<const double> y, std::vector<int> levels, double alpha) {
    detail::require_demand_series(y, Imapa::name);
    detail::check_weight(alpha, "alpha");
    if (levels.empty()) levels = default_imapa_levels(y);
    double sum = 0.0;
    for (int level : levels) {
        if (level < 1) throw ConfigError("IMAPA aggregation levels must be >= 1");
        sum += adida_rate(y, level, alpha);
    }
    IntermittentFit f;
    f.state.alpha = alpha;
    f.forecast = sum / static_cast<double>(levels.size());
    return f;
}

inline std::vector<double> croston_forecast(std::span<const double> y, int h, double alpha = 0.1) {
    require_horizon(h);
    return std::vector<double>(static_cast<std::size_t>(h), fit_croston(y, alpha).forecast);
}

inline std::vector<double> tsb_forecast(std::span<const double> y, int h, double alpha_d = 0.2, double alpha_p = 0.2) {
    require_horizon(h);
    return std::vector<double>(static_cast<std::size_t>(h), fit_tsb(y, alpha_d, alpha_p).forecast);
}

inline std::vector<double> adida_forecast(std::span<const double> y, int h, std::optional<int> level = std::nullopt,
                                          double alpha = 0.1) {
    require_horizon(h);
    return std::vector<double>(static_cast<std::size_t>(h), fit_adida(y, level, alpha).forecast);
}

inline std::vector<double> imapa_forecast(std::span<const double> y, int h, std::vector<int> levels = {},
                                          double alpha = 0.1) {
    require_horizon(h);
    return std::vector<double>(static_cast<std::size_t>(h), fit_imapa(y, std::move(levels), alpha).forecast);
}

inline std::size_t min_length(const Croston&) { return 1; }
inline std::size_t min_length(const Tsb&) { return 1; }
inline std::size_t min_length(const Adida&) { return 1; }
inline std::size_t min_length(const Imapa&) { return 1; }

inline IntermittentFit fit_model(const Croston& m, std::span<const double> y) { return fit_croston(y, m.alpha); }
inline IntermittentFit fit_model(const Tsb& m, std::span<const double> y) { return fit_tsb(y, m.alpha_d, m.alpha_p); }
inline IntermittentFit fit_model(const Adida& m, std::span<const double> y) {
    return fit_adida(y, m.aggregation_level, m.alpha);
}
inline IntermittentFit fit_model(const Imapa& m, std::span<const double> y) { return fit_imapa(y, m.levels, m.alpha); }

inline std::vector<double> predict_model(const IntermittentFit& f, int h) {
    require_horizon(h);
    return std::vector<double>(static_cast<std::size_t>(h), f.forecast);
}

// Smoothing weights are fixed by the model object, so forward is a refit.
template <class M>
    requires std::same_as<M, Croston> || std::same_as<M, Tsb> || std::same_as<M, Adida> || std::same_as<M, Imapa>
IntermittentFit refit_model(const M& m, const IntermittentFit&, std::span<const double> y) {
    return fit_model(m, y);
}

}  // namespace foldcast::models
