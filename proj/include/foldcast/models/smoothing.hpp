#pragma once

// Exponential smoothing family written as pure fold steps.
//
// The Holt-Winters step is the multiplicative-seasonal / additive-trend
// recursion:
//
//   yhat  = (l + phi*b) * s_lag
//   l'    = alpha * (y / s_lag) + (1 - alpha) * (l + phi*b)
//   b'    = beta * (l' - l) + (1 - beta) * phi * b
//   s'    = gamma * (y / l') + (1 - gamma) * s_lag
//
// where s_lag is the seasonal index from one full season earlier (the oldest
// entry of the ring buffer). SES and Holt have their own steps; SeasonalES is
// the Holt-Winters step with the trend pinned at zero.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "foldcast/dual.hpp"
#include "foldcast/fold.hpp"
#include "foldcast/models/common.hpp"
#include "foldcast/optimize.hpp"

namespace foldcast::models {

/// Fixed-capacity ring holding the last m seasonal indices, oldest first.
template <class T>
class SeasonalRing {
public:
    SeasonalRing() : buf_{T(1.0)} {}
    explicit SeasonalRing(std::vector<T> values) : buf_(std::move(values)) {
        if (buf_.empty()) throw ConfigError("seasonal buffer must be nonempty");
    }

    std::size_t size() const noexcept { return buf_.size(); }

    /// Logical index: 0 is the oldest entry.
    const T& operator[](std::size_t i) const { return buf_[(head_ + i) % buf_.size()]; }
    const T& front() const { return buf_[head_]; }

    /// Drops the oldest entry and appends `v` as the newest.
    void push(T v) {
        buf_[head_] = std::move(v);
        head_ = (head_ + 1) % buf_.size();
    }

    std::vector<T> to_vector() const {
        std::vector<T> out;
        out.reserve(buf_.size());
        for (std::size_t i = 0; i < buf_.size(); ++i) out.push_back((*this)[i]);
        return out;
    }

private:
    std::vector<T> buf_;
    std::size_t head_ = 0;
};

template <class T>
struct SmoothingCarry {
    T level{0.0};
    T trend{0.0};
    SeasonalRing<T> seasonal;
    T alpha{0.0};
    T beta{0.0};
    T gamma{0.0};
    double phi = 1.0;
};

/// Lifts a double carry into scalar type T with the given smoothing weights.
template <class T>
SmoothingCarry<T> lift_carry(const SmoothingCarry<double>& c, T alpha, T beta, T gamma) {
    std::vector<T> s;
    s.reserve(c.seasonal.size());
    for (std::size_t i = 0; i < c.seasonal.size(); ++i) s.emplace_back(c.seasonal[i]);
    return {T(c.level), T(c.trend), SeasonalRing<T>(std::move(s)), alpha, beta, gamma, c.phi};
}

template <class T>
std::pair<SmoothingCarry<T>, T> ses_step(SmoothingCarry<T> c, double y) {
    T yhat = c.level;
    c.level = c.alpha * y + (1.0 - c.alpha) * c.level;
    return {std::move(c), yhat};
}

template <class T>
std::pair<SmoothingCarry<T>, T> holt_step(SmoothingCarry<T> c, double y) {
    T damped = c.phi * c.trend;
    T base = c.level + damped;
    T level_new = c.alpha * y + (1.0 - c.alpha) * base;
    c.trend = c.beta * (level_new - c.level) + (1.0 - c.beta) * damped;
    c.level = level_new;
    return {std::move(c), base};
}

template <class T>
std::pair<SmoothingCarry<T>, T> hw_step(SmoothingCarry<T> c, double y) {
    const T s_lag = c.seasonal.front();
    if (value_of(s_lag) == 0.0) throw NumericDomainError("hw_step: seasonal index is zero");
    T damped = c.phi * c.trend;
    T base = c.level + damped;
    T yhat = base * s_lag;
    T level_new = c.alpha * (y / s_lag) + (1.0 - c.alpha) * base;
    T s_new = s_lag;
    // gamma == 0 exactly means the seasonal update is disabled; skip y / l'.
    if (value_of(c.gamma) != 0.0) {
        if (value_of(level_new) == 0.0) throw NumericDomainError("hw_step: level is zero");
        s_new = c.gamma * (y / level_new) + (1.0 - c.gamma) * s_lag;
    }
    c.trend = c.beta * (level_new - c.level) + (1.0 - c.beta) * damped;
    c.level = level_new;
    c.seasonal.push(std::move(s_new));
    return {std::move(c), yhat};
}

enum class SmoothingKind { Ses, Holt, SeasonalEs, HoltWinters };

inline std::string_view to_string(SmoothingKind k) {
    switch (k) {
        case SmoothingKind::Ses: return "SES";
        case SmoothingKind::Holt: return "Holt";
        case SmoothingKind::SeasonalEs: return "SeasonalES";
        case SmoothingKind::HoltWinters: return "HoltWinters";
    }
    return "?";
}

inline bool is_seasonal(SmoothingKind k) {
    return k == SmoothingKind::SeasonalEs || k == SmoothingKind::HoltWinters;
}
inline bool has_trend(SmoothingKind k) { return k == SmoothingKind::Holt || k == SmoothingKind::HoltWinters; }

inline std::size_t smoothing_min_length(SmoothingKind kind, int season_length) {
    switch (kind) {
        case SmoothingKind::Ses: return 2;
        case SmoothingKind::Holt: return 3;
        default: return 2 * static_cast<std::size_t>(season_length);
    }
}

/// Runs the kind's step over `y` from `init`.
template <class T>
ScanResult<SmoothingCarry<T>, T> smoothing_scan(SmoothingKind kind, SmoothingCarry<T> init, std::span<const double> y) {
    switch (kind) {
        case SmoothingKind::Ses: return scan(ses_step<T>, std::move(init), y);
        case SmoothingKind::Holt: return scan(holt_step<T>, std::move(init), y);
        default: return scan(hw_step<T>, std::move(init), y);
    }
}

/// Sum of squared one-step errors of the fold started at `init` with the
/// given (alpha, beta, gamma).
template <class T>
T sse_objective(SmoothingKind kind, const std::array<T, 3>& abg, const SmoothingCarry<double>& init,
                std::span<const double> y) {
    auto run = smoothing_scan(kind, lift_carry(init, abg[0], abg[1], abg[2]), y);
    T sse(0.0);
    for (std::size_t t = 0; t < y.size(); ++t) {
        T e = y[t] - run.outputs[t];
        sse += e * e;
    }
    return sse;
}

/// Deterministic starting state.
///
/// Non-seasonal: the level is placed so the first one-step fit reproduces
/// y_1 (l0 = y_1 - phi*b0, with b0 = y_2 - y_1 for Holt and 0 for SES).
/// Seasonal: l0 = mean of the first season, b0 = (mean of season 2 - mean of
/// season 1) / m when trended, s_i = y_i / l0 clipped away from zero. A
/// constant series gets unit seasonal indices.
inline SmoothingCarry<double> initial_state(SmoothingKind kind, std::span<const double> y, int season_length,
                                            double phi = 1.0) {
    SmoothingCarry<double> c;
    c.phi = phi;
    if (!is_seasonal(kind)) {
        c.trend = kind == SmoothingKind::Holt ? y[1] - y[0] : 0.0;
        c.level = y[0] - phi * c.trend;
        return c;
    }
    const auto m = static_cast<std::size_t>(season_length);
    const double first = mean_of(y.first(m));
    if (is_constant(y)) {
        c.level = first;
        c.seasonal = SeasonalRing<double>(std::vector<double>(m, 1.0));
        return c;
    }
    if (first == 0.0) {
        throw DataError(std::string(to_string(kind)) + ": first-season mean is zero; multiplicative seasonality is undefined");
    }
    c.level = first;
    if (kind == SmoothingKind::HoltWinters) c.trend = (mean_of(y.subspan(m, m)) - first) / static_cast<double>(m);
    std::vector<double> s(m);
    for (std::size_t i = 0; i < m; ++i) {
        double v = y[i] / first;
        if (std::abs(v) < 1e-8) v = std::copysign(1e-8, v == 0.0 ? 1.0 : v);
        s[i] = v;
    }
    c.seasonal = SeasonalRing<double>(std::move(s));
    return c;
}

struct SmoothingOptions {
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> gamma;
    /// Damping; held fixed, never fitted.
    double phi = 1.0;
    /// Emit mean +/- z * sigma * sqrt(k) bands when no conformal scores are present.
    bool gaussian_intervals = false;
};

struct Ses {
    static constexpr std::string_view name = "SES";
    SmoothingOptions options;
};

struct Holt {
    static constexpr std::string_view name = "Holt";
    SmoothingOptions options;
};

struct SeasonalEs {
    static constexpr std::string_view name = "SeasonalES";
    int season_length = 1;
    SmoothingOptions options;
};

enum class ComponentType { Additive, Multiplicative };

struct HoltWinters {
    static constexpr std::string_view name = "HoltWinters";
    int season_length = 1;
    ComponentType error_type = ComponentType::Additive;
    ComponentType season_type = ComponentType::Multiplicative;
    SmoothingOptions options;
};

struct SmoothingFit {
    SmoothingKind kind = SmoothingKind::Ses;
    int season_length = 1;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double phi = 1.0;
    bool gaussian_intervals = false;
    SmoothingCarry<double> initial;
    SmoothingCarry<double> final_state;
    std::vector<double> fitted;
    double sse = 0.0;
    double sse_at_init = 0.0;
    /// Root mean squared in-sample one-step error.
    double sigma = 0.0;
};

inline constexpr double kSmoothingLower = 0.0001;
inline constexpr double kSmoothingUpper = 0.9999;
inline constexpr double kSmoothingStart = 0.1;

namespace detail {

// Runs the fold with fixed weights and records fitted values and residual scale.
inline SmoothingFit finish_fit(SmoothingKind kind, int m, const SmoothingCarry<double>& init,
                               std::array<double, 3> abg, bool gaussian, std::span<const double> y) {
    auto run = smoothing_scan(kind, lift_carry(init, abg[0], abg[1], abg[2]), y);
    SmoothingFit f;
    f.kind = kind;
    f.season_length = m;
    f.alpha = abg[0];
    f.beta = abg[1];
    f.gamma = abg[2];
    f.phi = init.phi;
    f.gaussian_intervals = gaussian;
    f.initial = init;
    f.final_state = std::move(run.final_carry);
    f.fitted = std::move(run.outputs);
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double e = y[t] - f.fitted[t];
        f.sse += e * e;
    }
    f.sigma = std::sqrt(f.sse / static_cast<double>(y.size()));
    return f;
}

inline void validate_options(const SmoothingOptions& o) {
    for (auto p : {o.alpha, o.beta, o.gamma}) {
        if (p && !(*p >= 0.0 && *p <= 1.0)) throw ConfigError("smoothing parameters must lie in [0, 1]");
    }
    if (!(o.phi > 0.0 && o.phi <= 1.0)) throw ConfigError("phi must lie in (0, 1]");
}

}  // namespace detail

/**
 * Fits a smoothing model by minimizing the in-sample SSE over the free
 * weights (box [0.0001, 0.9999], start 0.1). Weights given in `options` are
 * held fixed. On a constant series the seasonal weight is frozen at 0.
 */
inline SmoothingFit fit_smoothing(SmoothingKind kind, std::span<const double> y, int season_length,
                                  const SmoothingOptions& options = {}) {
    detail::validate_options(options);
    if (is_seasonal(kind) && season_length < 1) throw ConfigError("season_length must be >= 1");
    const int m = is_seasonal(kind) ? season_length : 1;
    require_length(y, smoothing_min_length(kind, m), to_string(kind));
    require_finite(y, to_string(kind));

    const SmoothingCarry<double> init = initial_state(kind, y, m, options.phi);

    // Each of alpha, beta, gamma is either free (optimized) or pinned.
    std::array<bool, 3> used{true, has_trend(kind), is_seasonal(kind)};
    std::array<std::optional<double>, 3> pinned{options.alpha, options.beta, options.gamma};
    if (is_seasonal(kind) && is_constant(y)) pinned[2] = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        if (!used[i]) pinned[i] = 0.0;
    }

    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < 3; ++i) {
        if (!pinned[i]) free.push_back(i);
    }

    auto assemble = [&]<class T>(std::span<const T> p) {
        std::array<T, 3> abg{};
        std::size_t k = 0;
        for (std::size_t i = 0; i < 3; ++i) abg[i] = pinned[i] ? T(*pinned[i]) : p[k++];
        return abg;
    };

    std::array<double, 3> best{};
    for (std::size_t i = 0; i < 3; ++i) best[i] = pinned[i] ? *pinned[i] : kSmoothingStart;

    double sse_at_init = 0.0;
    if (!free.empty()) {
        auto objective = [&]<class T>(std::span<const T> p) { return sse_objective<T>(kind, assemble(p), init, y); };
        std::vector<double> start(free.size(), kSmoothingStart);
        std::vector<Bound> bounds(free.size(), Bound{kSmoothingLower, kSmoothingUpper});
        sse_at_init = objective(std::span<const double>(start));
        const Minimum opt = minimize(objective, start, bounds);
        for (std::size_t k = 0; k < free.size(); ++k) best[free[k]] = opt.params[k];
    } else {
        sse_at_init = sse_objective<double>(kind, best, init, y);
    }

    SmoothingFit f = detail::finish_fit(kind, m, init, best, options.gaussian_intervals, y);
    f.sse_at_init = sse_at_init;
    return f;
}

/// Forecast function of the final state:
///   yhat_{T+k} = (l_T + (phi + ... + phi^k) b_T) * s[(k-1) mod m]
inline std::vector<double> smoothing_forecast(const SmoothingCarry<double>& state, int h) {
    require_horizon(h);
    std::vector<double> out(static_cast<std::size_t>(h));
    double damp_sum = 0.0;
    double phi_k = 1.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        phi_k *= state.phi;
        damp_sum += phi_k;
        out[k] = (state.level + damp_sum * state.trend) * state.seasonal[k % state.seasonal.size()];
    }
    return out;
}

inline std::vector<double> predict_smoothing(const SmoothingFit& f, int h) {
    return smoothing_forecast(f.final_state, h);
}

/// Re-runs the fold on a new history with the learned weights held fixed.
inline SmoothingFit refit_smoothing(const SmoothingFit& learned, std::span<const double> y) {
    require_length(y, smoothing_min_length(learned.kind, learned.season_length), to_string(learned.kind));
    require_finite(y, to_string(learned.kind));
    const auto init = initial_state(learned.kind, y, learned.season_length, learned.phi);
    double gamma = learned.gamma;
    if (is_seasonal(learned.kind) && is_constant(y)) gamma = 0.0;
    SmoothingFit f = detail::finish_fit(learned.kind, learned.season_length, init,
                                        {learned.alpha, learned.beta, gamma}, learned.gaussian_intervals, y);
    f.sse_at_init = f.sse;
    return f;
}

// Model-catalog adapters.

inline std::size_t min_length(const Ses&) { return smoothing_min_length(SmoothingKind::Ses, 1); }
inline std::size_t min_length(const Holt&) { return smoothing_min_length(SmoothingKind::Holt, 1); }
inline std::size_t min_length(const SeasonalEs& m) {
    return smoothing_min_length(SmoothingKind::SeasonalEs, m.season_length);
}
inline std::size_t min_length(const HoltWinters& m) {
    return smoothing_min_length(SmoothingKind::HoltWinters, m.season_length);
}

inline SmoothingFit fit_model(const Ses& m, std::span<const double> y) {
    return fit_smoothing(SmoothingKind::Ses, y, 1, m.options);
}
inline SmoothingFit fit_model(const Holt& m, std::span<const double> y) {
    return fit_smoothing(SmoothingKind::Holt, y, 1, m.options);
}
inline SmoothingFit fit_model(const SeasonalEs& m, std::span<const double> y) {
    return fit_smoothing(SmoothingKind::SeasonalEs, y, m.season_length, m.options);
}
inline SmoothingFit fit_model(const HoltWinters& m, std::span<const double> y) {
    if (m.error_type != ComponentType::Additive || m.season_type != ComponentType::Multiplicative) {
        throw ConfigError("HoltWinters supports only additive error with multiplicative seasonality");
    }
    return fit_smoothing(SmoothingKind::HoltWinters, y, m.season_length, m.options);
}

inline std::vector<double> predict_model(const SmoothingFit& f, int h) { return predict_smoothing(f, h); }

template <class M>
    requires std::same_as<M, Ses> || std::same_as<M, Holt> || std::same_as<M, SeasonalEs> ||
             std::same_as<M, HoltWinters>
SmoothingFit refit_model(const M&, const SmoothingFit& learned, std::span<const double> y) {
    return refit_smoothing(learned, y);
}

}  // namespace foldcast::models
