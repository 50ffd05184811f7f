#pragma once

// fit / predict / forecast / forward over any catalog model, with optional
// conformal calibration attached to the spec.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "foldcast/conformal.hpp"
#include "foldcast/models/model.hpp"
#include "foldcast/series.hpp"

namespace foldcast {

/// A model plus optional conformal calibration. Immutable once built.
struct Forecaster {
    Model model;
    std::optional<ConformalConfig> conformal;
};

struct FittedModel {
    Forecaster spec;
    ModelFit fit;
    std::optional<ConformityMatrix> scores;
};

namespace detail {

inline void check_series(const Model& model, const TimeSeries& series) {
    series.validate();
    const std::size_t need = min_length(model);
    if (series.size() < need) {
        throw LengthError(std::string(model_name(model)) + " needs at least " + std::to_string(need) +
                              " observations, got " + std::to_string(series.size()),
                          need);
    }
}

}  // namespace detail

/// Point forecasts of a bare model from a training history.
inline std::vector<double> forecast_mean(const Model& model, const TimeSeries& train, int h) {
    detail::check_series(model, train);
    return predict_point(fit_point(model, train.values), h);
}

/// Walk-forward conformity scores of a model on a series.
inline ConformityMatrix conformity_scores(const Model& model, const TimeSeries& series, const ConformalConfig& config,
                                          BatchOptions batch = {.workers = 1}) {
    auto fn = [&model](const TimeSeries& train, int h, const std::optional<Matrix>&) {
        return forecast_mean(model, train, h);
    };
    return conformity_scores(fn, series, config, batch);
}

inline FittedModel fit(const Forecaster& spec, const TimeSeries& series) {
    detail::check_series(spec.model, series);
    FittedModel fitted{spec, fit_point(spec.model, series.values), std::nullopt};
    if (spec.conformal) fitted.scores = conformity_scores(spec.model, series, *spec.conformal);
    return fitted;
}

namespace detail {

inline ForecastResult predict_from(const FittedModel& model, const ModelFit& state, const ForecastRequest& request,
                                   bool with_fitted) {
    request.validate();
    ForecastResult result;
    result.mean = predict_point(state, request.horizon);
    if (with_fitted) result.fitted = fitted_values(state);
    if (request.levels.empty()) return result;

    if (model.scores) {
        return add_confidence_intervals(std::move(result), *model.scores, request.levels, model.spec.conformal->method);
    }
    if (auto bands = native_intervals(state, result.mean, request.levels)) {
        result.intervals = std::move(*bands);
        return result;
    }
    throw ConfigError(std::string(model_name(model.spec.model)) +
                      ": prediction levels requested but the model has no interval mechanism (attach a conformal "
                      "configuration)");
}

}  // namespace detail

/// h-step forecasts from a fitted model. Never mutates `model`.
inline ForecastResult predict(const FittedModel& model, const ForecastRequest& request, bool with_fitted = false) {
    return detail::predict_from(model, model.fit, request, with_fitted);
}

/// fit followed by predict.
inline ForecastResult forecast(const Forecaster& spec, const TimeSeries& series, const ForecastRequest& request,
                               bool with_fitted = false) {
    return predict(fit(spec, series), request, with_fitted);
}

/// Forecasts from a new history, reusing the parameters learned by `model`
/// (the state recursion is rerun on `series` with those parameters frozen).
/// Stored conformity scores are reused as well.
inline ForecastResult forward(const FittedModel& model, const TimeSeries& series, const ForecastRequest& request,
                              bool with_fitted = false) {
    detail::check_series(model.spec.model, series);
    const ModelFit state = refit_point(model.spec.model, model.fit, series.values);
    return detail::predict_from(model, state, request, with_fitted);
}

}  // namespace foldcast
