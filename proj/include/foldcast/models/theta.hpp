#pragma once

// Classical two-line Theta method.
//
//   theta=0 line: least-squares trend a + b*t, extrapolated linearly
//   theta=2 line: z_t = 2*d_t - (a + b*t), extrapolated flat by SES
//   forecast     = 0.5 * (theta0 + theta2), reseasonalized
//
// d is the series after optional multiplicative seasonal adjustment by
// classical decomposition (centred moving average, averaged ratios,
// normalized to mean 1). The adjustment runs when season_length > 1, the
// history covers two full seasons and every value is positive.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "foldcast/models/common.hpp"
#include "foldcast/models/smoothing.hpp"

namespace foldcast::models {

struct Theta {
    static constexpr std::string_view name = "Theta";
    int season_length = 1;
    /// SES weight for the theta=2 line; fitted when unset.
    std::optional<double> alpha;
};

struct ThetaFit {
    int season_length = 1;
    /// One index per season position, aligned so seasonal[t % m] applies to t (0-based).
    std::vector<double> seasonal;
    double intercept = 0.0;
    double slope = 0.0;
    std::size_t n = 0;
    double alpha = 0.0;
    double ses_level = 0.0;
    std::vector<double> fitted;
};

/// Multiplicative seasonal indices via classical decomposition.
inline std::vector<double> classical_seasonal_indices(std::span<const double> y, int season_length) {
    const auto m = static_cast<std::size_t>(season_length);
    const std::size_t n = y.size();
    // Centred moving average; a 2 x m average when m is even.
    std::vector<std::optional<double>> cma(n);
    const std::size_t half = m / 2;
    for (std::size_t t = half; t + half < n; ++t) {
        double sum = 0.0;
        if (m % 2 == 1) {
            for (std::size_t j = t - half; j <= t + half; ++j) sum += y[j];
            cma[t] = sum / static_cast<double>(m);
        } else {
            sum += 0.5 * y[t - half] + 0.5 * y[t + half];
            for (std::size_t j = t - half + 1; j < t + half; ++j) sum += y[j];
            cma[t] = sum / static_cast<double>(m);
        }
    }
    std::vector<double> total(m, 0.0);
    std::vector<double> count(m, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        if (!cma[t]) continue;
        total[t % m] += y[t] / *cma[t];
        count[t % m] += 1.0;
    }
    std::vector<double> idx(m, 1.0);
    double norm = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (count[j] > 0.0) idx[j] = total[j] / count[j];
        norm += idx[j];
    }
    norm /= static_cast<double>(m);
    for (double& v : idx) v /= norm;
    return idx;
}

namespace detail {

inline ThetaFit fit_theta_impl(std::span<const double> y, int season_length, std::optional<double> alpha) {
    if (season_length < 1) throw ConfigError("season_length must be >= 1");
    require_length(y, 2, Theta::name);
    require_finite(y, Theta::name);

    ThetaFit f;
    f.season_length = season_length;
    f.n = y.size();
    const auto m = static_cast<std::size_t>(season_length);

    bool positive = true;
    for (double v : y) positive = positive && v > 0.0;
    if (m > 1 && y.size() >= 2 * m && positive) {
        f.seasonal = classical_seasonal_indices(y, season_length);
    } else {
        f.seasonal.assign(1, 1.0);
    }

    std::vector<double> d(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) d[t] = y[t] / f.seasonal[t % f.seasonal.size()];

    // OLS on t = 1..n.
    const auto n = static_cast<double>(d.size());
    const double t_mean = (n + 1.0) / 2.0;
    const double d_mean = mean_of(d);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double dt = static_cast<double>(i + 1) - t_mean;
        sxy += dt * (d[i] - d_mean);
        sxx += dt * dt;
    }
    f.slope = sxy / sxx;
    f.intercept = d_mean - f.slope * t_mean;

    std::vector<double> z(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        z[i] = 2.0 * d[i] - (f.intercept + f.slope * static_cast<double>(i + 1));
    }
    SmoothingOptions ses;
    ses.alpha = alpha;
    const SmoothingFit line2 = fit_smoothing(SmoothingKind::Ses, z, 1, ses);
    f.alpha = line2.alpha;
    f.ses_level = line2.final_state.level;

    f.fitted.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double trend = f.intercept + f.slope * static_cast<double>(i + 1);
        f.fitted[i] = 0.5 * (trend + line2.fitted[i]) * f.seasonal[i % f.seasonal.size()];
    }
    return f;
}

}  // namespace detail

inline ThetaFit fit_theta(std::span<const double> y, int season_length = 1, std::optional<double> alpha = {}) {
    return detail::fit_theta_impl(y, season_length, alpha);
}

inline std::vector<double> predict_theta(const ThetaFit& f, int h) {
    require_horizon(h);
    std::vector<double> out(static_cast<std::size_t>(h));
    const auto n = static_cast<double>(f.n);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double line0 = f.intercept + f.slope * (n + static_cast<double>(k + 1));
        out[k] = 0.5 * (line0 + f.ses_level) * f.seasonal[(f.n + k) % f.seasonal.size()];
    }
    return out;
}

inline std::vector<double> theta_forecast(std::span<const double> y, int h, int season_length = 1) {
    return predict_theta(fit_theta(y, season_length), h);
}

inline std::size_t min_length(const Theta&) { return 2; }
inline ThetaFit fit_model(const Theta& m, std::span<const double> y) { return fit_theta(y, m.season_length, m.alpha); }
inline std::vector<double> predict_model(const ThetaFit& f, int h) { return predict_theta(f, h); }

/// Keeps the learned SES weight; trend and seasonal indices are recomputed
/// from the new history.
inline ThetaFit refit_model(const Theta& m, const ThetaFit& learned, std::span<const double> y) {
    return fit_theta(y, m.season_length, learned.alpha);
}

}  // namespace foldcast::models
