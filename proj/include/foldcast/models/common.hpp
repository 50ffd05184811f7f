#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "foldcast/error.hpp"

namespace foldcast::models {

inline void require_length(std::span<const double> y, std::size_t minimum, std::string_view model) {
    if (y.size() < minimum) {
        throw LengthError(std::string(model) + " needs at least " + std::to_string(minimum) +
                              " observations, got " + std::to_string(y.size()),
                          minimum);
    }
}

inline void require_finite(std::span<const double> y, std::string_view model) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i])) {
            throw DataError(std::string(model) + ": non-finite value at index " + std::to_string(i));
        }
    }
}

inline void require_horizon(int h) {
    if (h < 1) throw ConfigError("horizon must be >= 1");
}

inline double mean_of(std::span<const double> y) {
    return std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
}

inline bool is_constant(std::span<const double> y) {
    for (double v : y) {
        if (v != y.front()) return false;
    }
    return true;
}

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace foldcast::models
