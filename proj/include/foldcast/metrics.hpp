#pragma once

// Point and probabilistic accuracy metrics.
//
// Point metrics treat the last axis as the horizon: each row along the
// leading axes is scored on its own and the row scores are averaged. A 1-d
// input is a single row. Operands broadcast NumPy-style.
//
// MASE scales by the one-step naive error measured on the holdout itself,
//   MASE = mean|y - yhat| / ( 1/(H-1) * sum_{t=2..H} |y_t - y_{t-1}| ),
// not by an in-sample seasonal-naive error as in the classical definition.

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "foldcast/error.hpp"
#include "foldcast/ndarray.hpp"

namespace foldcast::metrics {

namespace detail {

template <class RowFn>
double rowwise(const NdArray& y_true, const NdArray& y_pred, RowFn&& fn) {
    const auto shape = broadcast_shape(y_true.shape(), y_pred.shape());
    const NdArray t = broadcast_to(y_true, shape);
    const NdArray p = broadcast_to(y_pred, shape);
    const std::size_t H = shape.empty() ? 1 : shape.back();
    if (H == 0) throw LengthError("metric over an empty horizon", 1);
    const std::size_t rows = t.size() / H;
    double total = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        total += fn(t.data().subspan(r * H, H), p.data().subspan(r * H, H), r * H);
    }
    return total / static_cast<double>(rows);
}

inline NdArray as_array(std::span<const double> v) { return NdArray::vector(v); }

}  // namespace detail

inline double mae(const NdArray& y_true, const NdArray& y_pred) {
    return detail::rowwise(y_true, y_pred, [](auto t, auto p, std::size_t) {
        double s = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) s += std::abs(t[i] - p[i]);
        return s / static_cast<double>(t.size());
    });
}

inline double mse(const NdArray& y_true, const NdArray& y_pred) {
    return detail::rowwise(y_true, y_pred, [](auto t, auto p, std::size_t) {
        double s = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) s += (t[i] - p[i]) * (t[i] - p[i]);
        return s / static_cast<double>(t.size());
    });
}

inline double rmse(const NdArray& y_true, const NdArray& y_pred) {
    return detail::rowwise(y_true, y_pred, [](auto t, auto p, std::size_t) {
        double s = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) s += (t[i] - p[i]) * (t[i] - p[i]);
        return std::sqrt(s / static_cast<double>(t.size()));
    });
}

/// Percent; undefined when any true value is zero.
inline double mape(const NdArray& y_true, const NdArray& y_pred) {
    return detail::rowwise(y_true, y_pred, [](auto t, auto p, std::size_t base) {
        double s = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] == 0.0) throw DataError("MAPE: true value is zero at index " + std::to_string(base + i));
            s += std::abs((t[i] - p[i]) / t[i]);
        }
        return 100.0 * s / static_cast<double>(t.size());
    });
}

/// Percent in [0, 200]. Terms with |y| + |yhat| == 0 count as zero error.
inline double smape(const NdArray& y_true, const NdArray& y_pred) {
    return detail::rowwise(y_true, y_pred, [](auto t, auto p, std::size_t) {
        double s = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double denom = std::abs(t[i]) + std::abs(p[i]);
            if (denom > 0.0) s += 2.0 * std::abs(t[i] - p[i]) / denom;
        }
        return 100.0 * s / static_cast<double>(t.size());
    });
}

/// Mean of y - yhat.
inline double bias(const NdArray& y_true, const NdArray& y_pred) {
    return detail::rowwise(y_true, y_pred, [](auto t, auto p, std::size_t) {
        double s = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) s += t[i] - p[i];
        return s / static_cast<double>(t.size());
    });
}

/// Sum of y - yhat over the horizon.
inline double cumulative_error(const NdArray& y_true, const NdArray& y_pred) {
    return detail::rowwise(y_true, y_pred, [](auto t, auto p, std::size_t) {
        double s = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) s += t[i] - p[i];
        return s;
    });
}

inline double mase(const NdArray& y_true, const NdArray& y_pred) {
    return detail::rowwise(y_true, y_pred, [](auto t, auto p, std::size_t base) {
        if (t.size() < 2) throw LengthError("MASE needs a holdout of at least 2 points", 2);
        double num = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) num += std::abs(t[i] - p[i]);
        num /= static_cast<double>(t.size());
        double den = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i) den += std::abs(t[i] - t[i - 1]);
        den /= static_cast<double>(t.size() - 1);
        if (den == 0.0) {
            throw DataError("MASE: holdout is constant (zero naive error) in the row starting at index " +
                            std::to_string(base));
        }
        return num / den;
    });
}

// Span conveniences for single series.
#define FOLDCAST_SPAN_METRIC(fn)                                                  \
    inline double fn(std::span<const double> y_true, std::span<const double> y_pred) { \
        return fn(detail::as_array(y_true), detail::as_array(y_pred));            \
    }
FOLDCAST_SPAN_METRIC(mae)
FOLDCAST_SPAN_METRIC(mse)
FOLDCAST_SPAN_METRIC(rmse)
FOLDCAST_SPAN_METRIC(mape)
FOLDCAST_SPAN_METRIC(smape)
FOLDCAST_SPAN_METRIC(bias)
FOLDCAST_SPAN_METRIC(cumulative_error)
FOLDCAST_SPAN_METRIC(mase)
#undef FOLDCAST_SPAN_METRIC

inline double pinball(double error, double q) { return std::max(q * error, (q - 1.0) * error); }

/// Mean pinball loss of a single quantile forecast.
inline double quantile_loss(const NdArray& y_true, const NdArray& y_pred_q, double q) {
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("quantile must lie in (0, 1)");
    const NdArray loss = broadcast_apply(y_true, y_pred_q, [q](double t, double p) { return pinball(t - p, q); });
    double s = 0.0;
    for (double v : loss.data()) s += v;
    return s / static_cast<double>(loss.size());
}

inline double quantile_loss(std::span<const double> y_true, std::span<const double> y_pred_q, double q) {
    return quantile_loss(NdArray::vector(y_true), NdArray::vector(y_pred_q), q);
}

namespace detail {

// Pinball losses with the quantile axis last: y_true (..., H) or (..., H, 1)
// against y_pred (..., H, Q).
inline NdArray quantile_losses(const NdArray& y_true, const NdArray& y_pred, std::span<const double> qs) {
    if (y_pred.ndim() == 0 || y_pred.shape().back() != qs.size()) {
        throw DataError("last axis of the quantile forecasts must match the number of quantiles");
    }
    for (double q : qs) {
        if (!(q > 0.0 && q < 1.0)) throw ConfigError("quantiles must lie in (0, 1)");
    }
    const NdArray t = y_true.ndim() + 1 == y_pred.ndim() ? y_true.expand_last() : y_true;
    const NdArray err = broadcast_apply(t, y_pred, [](double a, double b) { return a - b; });
    return broadcast_apply(err, NdArray::vector(qs), [](double e, double q) { return pinball(e, q); });
}

}  // namespace detail

/// Pinball loss averaged over every series, step and quantile.
inline double multi_quantile_loss(const NdArray& y_true, const NdArray& y_pred, std::span<const double> qs) {
    const NdArray loss = detail::quantile_losses(y_true, y_pred, qs);
    double s = 0.0;
    for (double v : loss.data()) s += v;
    return s / static_cast<double>(loss.size());
}

/// Quantile-grid CRPS approximation 2 * mean pinball loss, divided by the
/// mean |y_true|.
inline double scaled_crps(const NdArray& y_true, const NdArray& y_pred, std::span<const double> qs) {
    double scale = 0.0;
    for (double v : y_true.data()) scale += std::abs(v);
    scale /= static_cast<double>(y_true.size());
    if (scale == 0.0) throw DataError("scaled CRPS: mean |y_true| is zero");
    return 2.0 * multi_quantile_loss(y_true, y_pred, qs) / scale;
}

/// Fraction of true values inside [lo, hi].
inline double coverage(const NdArray& y_true, const NdArray& lo, const NdArray& hi) {
    const auto shape = broadcast_shape(broadcast_shape(y_true.shape(), lo.shape()), hi.shape());
    const NdArray t = broadcast_to(y_true, shape);
    const NdArray l = broadcast_to(lo, shape);
    const NdArray u = broadcast_to(hi, shape);
    std::size_t inside = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(l[i]) || !std::isfinite(u[i])) {
            throw DataError("coverage: interval bounds must be finite (index " + std::to_string(i) + ")");
        }
        if (l[i] > u[i]) throw DataError("coverage: lower bound exceeds upper bound at index " + std::to_string(i));
        if (l[i] <= t[i] && t[i] <= u[i]) ++inside;
    }
    return static_cast<double>(inside) / static_cast<double>(t.size());
}

inline double coverage(std::span<const double> y_true, std::span<const double> lo, std::span<const double> hi) {
    return coverage(NdArray::vector(y_true), NdArray::vector(lo), NdArray::vector(hi));
}

/// Fraction of true values at or below the quantile forecast; compare with q.
inline double calibration(const NdArray& y_true, const NdArray& y_pred_q) {
    const NdArray below = broadcast_apply(y_true, y_pred_q, [](double t, double p) { return t <= p ? 1.0 : 0.0; });
    double s = 0.0;
    for (double v : below.data()) s += v;
    return s / static_cast<double>(below.size());
}

/// Named metric values for one evaluation.
struct MetricReport {
    std::map<std::string, double> values;
    std::vector<std::size_t> shape;
    std::size_t holdout = 0;
};

/// MAPE, MAE, RMSE and MASE of a holdout.
inline MetricReport holdout_report(const NdArray& y_true, const NdArray& y_pred) {
    MetricReport r;
    r.shape = broadcast_shape(y_true.shape(), y_pred.shape());
    r.holdout = r.shape.empty() ? 1 : r.shape.back();
    r.values["mape"] = mape(y_true, y_pred);
    r.values["mae"] = mae(y_true, y_pred);
    r.values["rmse"] = rmse(y_true, y_pred);
    r.values["mase"] = mase(y_true, y_pred);
    return r;
}

}  // namespace foldcast::metrics
