#pragma once

// Catalog lookup by command-line name.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "foldcast/error.hpp"
#include "foldcast/models/model.hpp"

namespace foldcast {

struct ModelOptions {
    int season_length = 1;
    /// WindowAverage window, or the number of seasons for SeasonalWindowAverage.
    int window = 1;
};

inline constexpr std::array<std::string_view, 16> kModelNames{
    "naive", "seasonal_naive", "historic_average", "window_average", "seasonal_window_average", "rwd",
    "ses",   "seasonal_es",    "holt",             "holt_winters",   "croston",                 "tsb",
    "adida", "imapa",          "theta",            "garch"};

/// Builds a model from its command-line name (or its display name).
inline Model make_model(std::string_view name, const ModelOptions& options = {}) {
    if (options.season_length < 1) throw ConfigError("season_length must be >= 1");
    if (options.window < 1) throw ConfigError("window must be >= 1");
    const int m = options.season_length;
    auto needs_season = [&](std::string_view model) {
        if (m < 2) throw ConfigError(std::string(model) + " needs season_length >= 2");
    };

    if (name == "naive" || name == Naive::name) return Naive{};
    if (name == "seasonal_naive" || name == SeasonalNaive::name) return SeasonalNaive{m};
    if (name == "historic_average" || name == HistoricAverage::name) return HistoricAverage{};
    if (name == "window_average" || name == WindowAverage::name) return WindowAverage{options.window};
    if (name == "seasonal_window_average" || name == SeasonalWindowAverage::name) {
        return SeasonalWindowAverage{m, options.window};
    }
    if (name == "rwd" || name == RandomWalkWithDrift::name) return RandomWalkWithDrift{};
    if (name == "ses" || name == Ses::name) return Ses{};
    if (name == "holt" || name == Holt::name) return Holt{};
    if (name == "seasonal_es" || name == SeasonalEs::name) {
        needs_season(name);
        return SeasonalEs{.season_length = m};
    }
    if (name == "holt_winters" || name == HoltWinters::name) {
        needs_season(name);
        return HoltWinters{.season_length = m};
    }
    if (name == "croston" || name == Croston::name) return Croston{};
    if (name == "tsb" || name == Tsb::name) return Tsb{};
    if (name == "adida" || name == Adida::name) return Adida{};
    if (name == "imapa" || name == Imapa::name) return Imapa{};
    if (name == "theta" || name == Theta::name) return Theta{.season_length = m};
    if (name == "garch" || name == Garch::name) return Garch{};
    throw ConfigError("unknown model '" + std::string(name) + "'");
}

/// Splits a comma list; "all" expands to the whole catalog.
inline std::vector<std::string> parse_model_list(std::string_view list) {
    std::vector<std::string> names;
    if (list == "all") {
        for (auto n : kModelNames) names.emplace_back(n);
        return names;
    }
    std::size_t start = 0;
    while (start <= list.size()) {
        const std::size_t comma = std::min(list.find(',', start), list.size());
        const std::string_view item = list.substr(start, comma - start);
        if (item.empty()) throw ConfigError("empty model name in list");
        names.emplace_back(item);
        start = comma + 1;
    }
    return names;
}

}  // namespace foldcast
