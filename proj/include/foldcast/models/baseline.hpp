#pragma once

// Baseline forecasters. None of these learn parameters; the "fit" records
// whatever slice of the history the forecast function reads.
//
// RandomWalkWithDrift, WindowAverage and SeasonalWindowAverage use the
// textbook definitions:
//   RWD:   y_T + k * (y_T - y_1) / (T - 1)
//   WA:    mean of the last `window` observations
//   SWA:   for each season position, the mean of its last `window` occurrences

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "foldcast/models/common.hpp"

namespace foldcast::models {

struct Naive {
    static constexpr std::string_view name = "Naive";
};

struct SeasonalNaive {
    static constexpr std::string_view name = "SeasonalNaive";
    int season_length = 1;
};

struct HistoricAverage {
    static constexpr std::string_view name = "HistoricAverage";
};

struct WindowAverage {
    static constexpr std::string_view name = "WindowAverage";
    int window = 1;
};

struct SeasonalWindowAverage {
    static constexpr std::string_view name = "SeasonalWindowAverage";
    int season_length = 1;
    int window = 1;
};

struct RandomWalkWithDrift {
    static constexpr std::string_view name = "RandomWalkWithDrift";
};

/// Per-season-position levels repeated cyclically (covers Naive, SeasonalNaive,
/// the averages) plus an optional linear drift (RWD).
struct BaselineFit {
    /// Level used at forecast step k is levels[(k - 1) % levels.size()].
    std::vector<double> levels;
    double drift = 0.0;
    std::vector<double> fitted;
};

namespace detail {

inline void check_positive(int v, std::string_view what) {
    if (v < 1) throw ConfigError(std::string(what) + " must be >= 1");
}

}  // namespace detail

inline std::size_t min_length(const Naive&) { return 1; }
inline std::size_t min_length(const HistoricAverage&) { return 1; }
inline std::size_t min_length(const RandomWalkWithDrift&) { return 2; }
inline std::size_t min_length(const SeasonalNaive& m) { return static_cast<std::size_t>(m.season_length); }
inline std::size_t min_length(const WindowAverage& m) { return static_cast<std::size_t>(m.window); }
inline std::size_t min_length(const SeasonalWindowAverage& m) {
    return static_cast<std::size_t>(m.season_length) * static_cast<std::size_t>(m.window);
}

inline BaselineFit fit_model(const Naive& m, std::span<const double> y) {
    require_length(y, min_length(m), m.name);
    BaselineFit f{{y.back()}, 0.0, std::vector<double>(y.size())};
    f.fitted[0] = kNaN;
    for (std::size_t t = 1; t < y.size(); ++t) f.fitted[t] = y[t - 1];
    return f;
}

inline BaselineFit fit_model(const SeasonalNaive& m, std::span<const double> y) {
    detail::check_positive(m.season_length, "season_length");
    require_length(y, min_length(m), m.name);
    const auto s = static_cast<std::size_t>(m.season_length);
    BaselineFit f{{y.end() - static_cast<std::ptrdiff_t>(s), y.end()}, 0.0, std::vector<double>(y.size(), kNaN)};
    for (std::size_t t = s; t < y.size(); ++t) f.fitted[t] = y[t - s];
    return f;
}

inline BaselineFit fit_model(const HistoricAverage& m, std::span<const double> y) {
    require_length(y, min_length(m), m.name);
    const double mu = mean_of(y);
    return {{mu}, 0.0, std::vector<double>(y.size(), mu)};
}

inline BaselineFit fit_model(const WindowAverage& m, std::span<const double> y) {
    detail::check_positive(m.window, "window");
    require_length(y, min_length(m), m.name);
    return {{mean_of(y.last(static_cast<std::size_t>(m.window)))}, 0.0, {}};
}

inline BaselineFit fit_model(const SeasonalWindowAverage& m, std::span<const double> y) {
    detail::check_positive(m.season_length, "season_length");
    detail::check_positive(m.window, "window");
    require_length(y, min_length(m), m.name);
    const auto s = static_cast<std::size_t>(m.season_length);
    const auto w = static_cast<std::size_t>(m.window);
    auto tail = y.last(s * w);
    std::vector<double> levels(s, 0.0);
    for (std::size_t i = 0; i < tail.size(); ++i) levels[i % s] += tail[i];
    for (double& l : levels) l /= static_cast<double>(w);
    return {std::move(levels), 0.0, {}};
}

inline BaselineFit fit_model(const RandomWalkWithDrift& m, std::span<const double> y) {
    require_length(y, min_length(m), m.name);
    const double drift = (y.back() - y.front()) / static_cast<double>(y.size() - 1);
    BaselineFit f{{y.back()}, drift, std::vector<double>(y.size())};
    f.fitted[0] = kNaN;
    for (std::size_t t = 1; t < y.size(); ++t) f.fitted[t] = y[t - 1] + drift;
    return f;
}

inline std::vector<double> predict_model(const BaselineFit& f, int h) {
    require_horizon(h);
    std::vector<double> out(static_cast<std::size_t>(h));
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = f.levels[k % f.levels.size()] + static_cast<double>(k + 1) * f.drift;
    }
    return out;
}

// No learned parameters: forward on a new history is a plain refit.
template <class M>
    requires requires(const M& m, std::span<const double> y) {
        { fit_model(m, y) } -> std::same_as<BaselineFit>;
    }
BaselineFit refit_model(const M& m, const BaselineFit&, std::span<const double> y) {
    return fit_model(m, y);
}

}  // namespace foldcast::models
