#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "foldcast/models/baseline.hpp"
#include "foldcast/models/garch.hpp"
#include "foldcast/models/intermittent.hpp"
#include "foldcast/models/smoothing.hpp"
#include "foldcast/models/theta.hpp"
#include "foldcast/series.hpp"

namespace foldcast {

using models::Adida;
using models::Croston;
using models::Garch;
using models::HistoricAverage;
using models::Holt;
using models::HoltWinters;
using models::Imapa;
using models::Naive;
using models::RandomWalkWithDrift;
using models::SeasonalEs;
using models::SeasonalNaive;
using models::SeasonalWindowAverage;
using models::Ses;
using models::Theta;
using models::Tsb;
using models::WindowAverage;

/// Every model in the catalog.
using Model = std::variant<Naive, SeasonalNaive, HistoricAverage, WindowAverage, SeasonalWindowAverage,
                           RandomWalkWithDrift, Ses, Holt, SeasonalEs, HoltWinters, Croston, Tsb, Adida, Imapa,
                           Theta, Garch>;

/// Learned state of a fitted model.
using ModelFit = std::variant<models::BaselineFit, models::SmoothingFit, models::IntermittentFit, models::ThetaFit,
                              models::GarchFit>;

inline std::string_view model_name(const Model& m) {
    return std::visit([](const auto& spec) { return std::string_view(spec.name); }, m);
}

inline std::size_t min_length(const Model& m) {
    return std::visit([](const auto& spec) { return models::min_length(spec); }, m);
}

inline ModelFit fit_point(const Model& m, std::span<const double> y) {
    return std::visit([&](const auto& spec) -> ModelFit { return models::fit_model(spec, y); }, m);
}

inline std::vector<double> predict_point(const ModelFit& f, int h) {
    return std::visit([&](const auto& fit) { return models::predict_model(fit, h); }, f);
}

/// Frozen-parameter rerun on a new history.
inline ModelFit refit_point(const Model& m, const ModelFit& learned, std::span<const double> y) {
    return std::visit(
        [&](const auto& spec) -> ModelFit {
            using Fit = decltype(models::fit_model(spec, y));
            return models::refit_model(spec, std::get<Fit>(learned), y);
        },
        m);
}

inline const std::vector<double>& fitted_values(const ModelFit& f) {
    return std::visit([](const auto& fit) -> const std::vector<double>& { return fit.fitted; }, f);
}

/// Gaussian bands mean +/- z * sigma * sqrt(k) for smoothing fits that
/// opted in; nullopt for everything else.
inline std::optional<std::vector<IntervalBand>> native_intervals(const ModelFit& f, std::span<const double> mean,
                                                                 std::span<const double> levels) {
    const auto* s = std::get_if<models::SmoothingFit>(&f);
    if (s == nullptr || !s->gaussian_intervals) return std::nullopt;
    const boost::math::normal standard;
    std::vector<IntervalBand> bands;
    for (double level : levels) {
        const double z = boost::math::quantile(standard, 0.5 + level / 200.0);
        IntervalBand band{level, std::vector<double>(mean.size()), std::vector<double>(mean.size())};
        for (std::size_t k = 0; k < mean.size(); ++k) {
            const double half = z * s->sigma * std::sqrt(static_cast<double>(k + 1));
            band.lo[k] = mean[k] - half;
            band.hi[k] = mean[k] + half;
        }
        bands.push_back(std::move(band));
    }
    return bands;
}

}  // namespace foldcast
