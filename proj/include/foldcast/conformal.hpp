#pragma once

// Distribution-free prediction intervals from walk-forward calibration.
//
// The last K*h observations are cut into K consecutive blocks of h. Window w
// trains on y[1..t_w] with t_w = T - (K + 1 - w) * h and is scored on the
// next h observations. The K x h matrix of signed residuals is turned into
// intervals per forecast step:
//
//   symmetric: quantiles of { yhat +/- |eps_wk| }   (2K points)
//   signed:    quantiles of { yhat + eps_wk }       (K points)

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "foldcast/error.hpp"
#include "foldcast/fold.hpp"
#include "foldcast/series.hpp"

namespace foldcast {

enum class ConformalMethod { Symmetric, Signed };

inline std::string_view to_string(ConformalMethod m) {
    return m == ConformalMethod::Symmetric ? "symmetric" : "signed";
}

inline ConformalMethod parse_conformal_method(std::string_view s) {
    if (s == "symmetric" || s == "conformal_distribution") return ConformalMethod::Symmetric;
    if (s == "signed" || s == "conformal_signed") return ConformalMethod::Signed;
    throw ConfigError("unknown conformal method '" + std::string(s) + "'");
}

struct ConformalConfig {
    int n_windows = 2;
    int h = 1;
    ConformalMethod method = ConformalMethod::Symmetric;

    void validate() const {
        if (n_windows < 2) throw ConfigError("conformal n_windows must be >= 2");
        if (h < 1) throw ConfigError("conformal h must be >= 1");
    }
};

/// K x h matrix of signed residuals; rows are windows, columns forecast steps.
class ConformityMatrix {
public:
    ConformityMatrix() = default;
    explicit ConformityMatrix(Matrix scores) : scores_(std::move(scores)) {
        for (double v : scores_.data()) {
            if (!std::isfinite(v)) throw DataError("conformity scores must be finite");
        }
    }

    std::size_t windows() const noexcept { return scores_.rows(); }
    std::size_t horizon() const noexcept { return scores_.cols(); }
    double operator()(std::size_t w, std::size_t k) const { return scores_(w, k); }
    std::vector<double> column(std::size_t k) const { return scores_.column(k); }
    const Matrix& matrix() const noexcept { return scores_; }

    friend bool operator==(const ConformityMatrix&, const ConformityMatrix&) = default;

private:
    Matrix scores_;
};

/// Training cut t_w (1-based count of training observations) for w = 1..K.
inline std::vector<std::size_t> partition_windows(std::size_t T, std::size_t K, std::size_t h) {
    if (K == 0 || h == 0) throw ConfigError("partition_windows: K and h must be positive");
    if (T <= K * h) {
        throw LengthError("insufficient history: need more than K*h = " + std::to_string(K * h) +
                              " observations, got " + std::to_string(T),
                          K * h + 1);
    }
    std::vector<std::size_t> cuts(K);
    for (std::size_t w = 1; w <= K; ++w) cuts[w - 1] = T - (K + 1 - w) * h;
    return cuts;
}

/// Linear-interpolation quantile of an ascending-sorted sample:
/// g = p * (n - 1), interpolate between floor(g) and ceil(g).
inline double sorted_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw LengthError("quantile of an empty sample", 1);
    const double g = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(g));
    const auto hi = static_cast<std::size_t>(std::ceil(g));
    const double frac = g - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace detail {

inline std::pair<double, double> interval_from_set(std::vector<double> set, double level) {
    if (!(level > 0.0 && level < 100.0)) throw ConfigError("level must lie in (0, 100)");
    std::sort(set.begin(), set.end());
    const double alpha = 1.0 - level / 100.0;
    return {sorted_quantile(set, alpha / 2.0), sorted_quantile(set, 1.0 - alpha / 2.0)};
}

}  // namespace detail

/// Bounds point -/+ half_width, nudged by at most a few ulps so that
/// lo + hi == 2 * point holds in floating point whenever the sum is
/// representable at the bounds' precision.
inline std::pair<double, double> centred_bounds(double point, double half_width) {
    const double hi = point + half_width;
    double lo = point - half_width;
    const double target = 2.0 * point;
    for (int i = 0; i < 4 && lo + hi != target; ++i) {
        lo = std::nextafter(lo, lo + hi < target ? HUGE_VAL : -HUGE_VAL);
    }
    if (lo + hi != target) lo = point - half_width;
    return {lo, hi};
}

inline std::pair<double, double> symmetric_interval(double point, std::span<const double> scores, double level) {
    // The plausible set {point +/- |e|} is symmetric about point, so its
    // quantiles are point -/+ the upper quantile of {-|e|, +|e|}.
    std::vector<double> set;
    set.reserve(2 * scores.size());
    for (double e : scores) {
        set.push_back(-std::abs(e));
        set.push_back(std::abs(e));
    }
    const auto [lo, hi] = detail::interval_from_set(std::move(set), level);
    return centred_bounds(point, 0.5 * (hi - lo));
}

inline std::pair<double, double> signed_interval(double point, std::span<const double> scores, double level) {
    std::vector<double> set;
    set.reserve(scores.size());
    for (double e : scores) set.push_back(point + e);
    return detail::interval_from_set(std::move(set), level);
}

/// Highest level whose tails the method can resolve with K windows:
/// 100 * (1 - 1/K) symmetric, 100 * (1 - 2/K) signed.
inline double max_supported_level(ConformalMethod method, std::size_t K) {
    const double per_tail = (method == ConformalMethod::Symmetric ? 1.0 : 2.0) / static_cast<double>(K);
    return 100.0 * (1.0 - per_tail);
}

/// Adds lo-{level} / hi-{level} bands built step by step from the score
/// columns. Levels beyond max_supported_level() are still emitted, with a
/// warning attached to the result.
inline ForecastResult add_confidence_intervals(ForecastResult result, const ConformityMatrix& scores,
                                               std::span<const double> levels, ConformalMethod method) {
    const std::size_t h = result.mean.size();
    if (h > scores.horizon()) {
        throw ConfigError("forecast horizon " + std::to_string(h) + " exceeds the calibration horizon " +
                          std::to_string(scores.horizon()));
    }
    std::vector<std::vector<double>> columns(h);
    for (std::size_t k = 0; k < h; ++k) columns[k] = scores.column(k);

    const double limit = max_supported_level(method, scores.windows());
    for (double level : levels) {
        if (level > limit) {
            result.warnings.push_back("level " + format_level(level) + " exceeds the " + std::string(to_string(method)) +
                                      " method's resolvable coverage of about " + format_level(limit) + " with " +
                                      std::to_string(scores.windows()) + " windows");
        }
        IntervalBand band{level, std::vector<double>(h), std::vector<double>(h)};
        for (std::size_t k = 0; k < h; ++k) {
            auto [lo, hi] = method == ConformalMethod::Symmetric ? symmetric_interval(result.mean[k], columns[k], level)
                                                                 : signed_interval(result.mean[k], columns[k], level);
            band.lo[k] = lo;
            band.hi[k] = hi;
        }
        result.intervals.push_back(std::move(band));
    }
    return result;
}

/**
 * Walk-forward conformity scores for any point forecaster.
 *
 * `forecast_mean(train, h, exog_future)` must return h point forecasts from
 * the training prefix. When the series carries regressors, the prefix keeps
 * rows 1..t_w and `exog_future` holds rows t_w+1..t_w+h. Windows are
 * independent and are evaluated through batch_map; a failing window is
 * reported as a BatchError whose index is the zero-based window.
 */
template <class ForecastMean>
    requires std::invocable<ForecastMean&, const TimeSeries&, int, const std::optional<Matrix>&>
ConformityMatrix conformity_scores(ForecastMean&& forecast_mean, const TimeSeries& series, const ConformalConfig& config,
                                   BatchOptions batch = {.workers = 1}) {
    config.validate();
    const auto h = static_cast<std::size_t>(config.h);
    const auto cuts = partition_windows(series.size(), static_cast<std::size_t>(config.n_windows), h);

    auto score_window = [&](const std::size_t& cut) {
        TimeSeries train = series.prefix(cut);
        std::optional<Matrix> future;
        if (series.exog) future = series.exog->slice_rows(cut, h);
        const std::vector<double> yhat = forecast_mean(train, config.h, future);
        if (yhat.size() != h) throw ConfigError("forecaster returned the wrong number of steps");
        std::vector<double> row(h);
        for (std::size_t k = 0; k < h; ++k) row[k] = series.values[cut + k] - yhat[k];
        return row;
    };
    const auto rows = batch_map(score_window, cuts, batch);

    Matrix m(rows.size(), h);
    for (std::size_t w = 0; w < rows.size(); ++w) std::copy(rows[w].begin(), rows[w].end(), m.row(w).begin());
    return ConformityMatrix(std::move(m));
}

}  // namespace foldcast
