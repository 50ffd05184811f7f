#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "foldcast/series.hpp"

namespace foldcast::io {

using ordered_json = nlohmann::ordered_json;

/// {"unique_id": id, "mean": [...], "lo-80": [...], "hi-80": [...], ...}
inline ordered_json forecast_to_json(const std::string& id, const ForecastResult& result) {
    ordered_json j;
    j["unique_id"] = id;
    for (const auto& [key, values] : result.columns()) j[key] = *values;
    return j;
}

/// One object per series, in dataset order.
inline ordered_json forecasts_to_json(std::span<const std::string> ids, std::span<const ForecastResult> results) {
    ordered_json arr = ordered_json::array();
    for (std::size_t i = 0; i < results.size(); ++i) arr.push_back(forecast_to_json(ids[i], results[i]));
    return arr;
}

}  // namespace foldcast::io
