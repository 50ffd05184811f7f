#pragma once

// GARCH(1,1) on demeaned returns.
//
//   eps_t     = y_t - mean(y)
//   sigma2_t  = omega + a * eps_{t-1}^2 + b * sigma2_{t-1}
//   NLL       = sum_t log(sigma2_t) + eps_t^2 / sigma2_t
//
// The pre-sample eps_0^2 and sigma2_0 are both backcast with the sample
// variance. Parameters are fitted on standardized residuals and mapped back
// (omega scales with the variance; a and b are scale free).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "foldcast/dual.hpp"
#include "foldcast/fold.hpp"
#include "foldcast/models/common.hpp"
#include "foldcast/optimize.hpp"

namespace foldcast::models {

inline constexpr double kVarianceFloor = 1e-12;
inline constexpr double kPersistenceCap = 0.9999;

struct Garch {
    static constexpr std::string_view name = "GARCH";
};

template <class T>
struct GarchState {
    T omega{0.0};
    T a{0.0};
    T b{0.0};
    T prev_sigma2{0.0};
    double prev_eps2 = 0.0;
};

/// One variance recursion step; input is eps_t, output sigma2_t.
template <class T>
std::pair<GarchState<T>, T> garch_step(GarchState<T> s, double eps) {
    T sigma2 = s.omega + s.a * s.prev_eps2 + s.b * s.prev_sigma2;
    if (value_of(sigma2) < kVarianceFloor) sigma2 = T(kVarianceFloor);
    s.prev_sigma2 = sigma2;
    s.prev_eps2 = eps * eps;
    return {s, sigma2};
}

template <class T>
std::vector<T> garch_variances(T omega, T a, T b, std::span<const double> eps, double backcast) {
    GarchState<T> init{omega, a, b, T(backcast), backcast};
    return scan(garch_step<T>, init, eps).outputs;
}

/// Gaussian negative log-likelihood up to constants.
template <class T>
T garch_nll(T omega, T a, T b, std::span<const double> eps, double backcast) {
    using std::log;
    const auto sigma2 = garch_variances(omega, a, b, eps, backcast);
    T nll(0.0);
    for (std::size_t t = 0; t < eps.size(); ++t) nll += log(sigma2[t]) + (eps[t] * eps[t]) / sigma2[t];
    return nll;
}

struct GarchFit {
    double omega = 0.0;
    double a = 0.0;
    double b = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    std::vector<double> sigma2;
    double last_eps2 = 0.0;
    double nll = 0.0;
    std::vector<double> fitted;
};

inline void project_stationary(std::vector<double>& p) {
    const double persistence = p[1] + p[2];
    if (persistence > kPersistenceCap) {
        const double scale = kPersistenceCap / persistence;
        p[1] *= scale;
        p[2] *= scale;
    }
}

namespace detail {

inline GarchFit garch_summarize(std::span<const double> y, double omega, double a, double b) {
    GarchFit f;
    f.mean = mean_of(y);
    std::vector<double> eps(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) eps[t] = y[t] - f.mean;
    double var = 0.0;
    for (double e : eps) var += e * e;
    var /= static_cast<double>(eps.size());
    f.variance = var;
    f.omega = omega;
    f.a = a;
    f.b = b;
    const double backcast = std::max(var, kVarianceFloor);
    f.sigma2 = garch_variances(omega, a, b, eps, backcast);
    f.nll = garch_nll(omega, a, b, eps, backcast);
    f.last_eps2 = eps.back() * eps.back();
    f.fitted.assign(y.size(), f.mean);
    return f;
}

}  // namespace detail

inline GarchFit fit_garch(std::span<const double> y) {
    require_length(y, 10, Garch::name);
    require_finite(y, Garch::name);

    const double mu = mean_of(y);
    double var = 0.0;
    for (double v : y) var += (v - mu) * (v - mu);
    var /= static_cast<double>(y.size());
    if (var <= kVarianceFloor) {
        // Degenerate: no variability to model.
        return detail::garch_summarize(y, kVarianceFloor, 0.0, 0.0);
    }

    const double sd = std::sqrt(var);
    std::vector<double> u(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) u[t] = (y[t] - mu) / sd;

    auto objective = [&]<class T>(std::span<const T> p) -> T {
        if (p.size() != 3) throw ConfigError("GARCH objective takes (omega, a, b)");
        return garch_nll<T>(p[0], p[1], p[2], u, 1.0);
    };
    MinimizeOptions opts;
    opts.project = project_stationary;
    const std::vector<Bound> bounds{{1e-6, 10.0}, {0.0, kPersistenceCap}, {0.0, kPersistenceCap}};
    const Minimum m = minimize(objective, {0.1, 0.05, 0.9}, bounds, opts);
    return detail::garch_summarize(y, m.params[0] * var, m.params[1], m.params[2]);
}

/// sigma2_{T+1} = omega + a*eps_T^2 + b*sigma2_T, then
/// sigma2_{T+k} = omega + (a + b) * sigma2_{T+k-1}.
inline std::vector<double> garch_variance_forecast(const GarchFit& f, int h) {
    require_horizon(h);
    std::vector<double> out(static_cast<std::size_t>(h));
    double s2 = std::max(f.omega + f.a * f.last_eps2 + f.b * f.sigma2.back(), kVarianceFloor);
    out[0] = s2;
    for (std::size_t k = 1; k < out.size(); ++k) {
        s2 = std::max(f.omega + (f.a + f.b) * s2, kVarianceFloor);
        out[k] = s2;
    }
    return out;
}

struct GarchForecast {
    std::vector<double> variance;
    std::vector<double> mean;
};

inline GarchForecast garch_fit_forecast(std::span<const double> y, int h) {
    const GarchFit f = fit_garch(y);
    return {garch_variance_forecast(f, h), std::vector<double>(static_cast<std::size_t>(h), f.mean)};
}

inline std::size_t min_length(const Garch&) { return 10; }
inline GarchFit fit_model(const Garch&, std::span<const double> y) { return fit_garch(y); }
inline std::vector<double> predict_model(const GarchFit& f, int h) {
    require_horizon(h);
    return std::vector<double>(static_cast<std::size_t>(h), f.mean);
}

/// Frozen (omega, a, b) rerun over the new history.
inline GarchFit refit_model(const Garch&, const GarchFit& learned, std::span<const double> y) {
    require_length(y, 10, Garch::name);
    require_finite(y, Garch::name);
    return detail::garch_summarize(y, learned.omega, learned.a, learned.b);
}

}  // namespace foldcast::models
