#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "foldcast/error.hpp"

namespace foldcast {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double> column(std::size_t c) const {
        std::vector<double> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    /// Rows [first, first + count).
    Matrix slice_rows(std::size_t first, std::size_t count) const {
        Matrix m(count, cols_);
        std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(first * cols_), count * cols_, m.data_.begin());
        return m;
    }

    void append_row(std::span<const double> values) {
        if (rows_ == 0 && cols_ == 0) cols_ = values.size();
        if (values.size() != cols_) throw DataError("Matrix::append_row: width mismatch");
        data_.insert(data_.end(), values.begin(), values.end());
        ++rows_;
    }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// One univariate history with an optional aligned regressor matrix.
struct TimeSeries {
    std::string id = "y0";
    std::vector<double> values;
    /// T_ext x C with T_ext >= values.size(); rows past the history are future covariates.
    std::optional<Matrix> exog;

    TimeSeries() = default;
    TimeSeries(std::vector<double> v) : values(std::move(v)) {}  // NOLINT
    TimeSeries(std::string name, std::vector<double> v, std::optional<Matrix> x = std::nullopt)
        : id(std::move(name)), values(std::move(v)), exog(std::move(x)) {}

    std::size_t size() const noexcept { return values.size(); }

    /// Throws DataError when the invariants do not hold.
    void validate() const {
        if (values.empty()) throw LengthError("series '" + id + "' is empty", 1);
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i])) {
                throw DataError("series '" + id + "' has a non-finite value at index " + std::to_string(i));
            }
        }
        if (exog && exog->rows() < values.size()) {
            throw DataError("series '" + id + "': exogenous matrix has fewer rows than the history");
        }
    }

    /// First `n` observations, with the matching regressor rows.
    TimeSeries prefix(std::size_t n) const {
        TimeSeries out(id, std::vector<double>(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n)));
        if (exog) out.exog = exog->slice_rows(0, n);
        return out;
    }
};

struct ForecastRequest {
    int horizon = 1;
    /// Coverage percentages, strictly increasing, each in (0, 100).
    std::vector<double> levels;
    std::optional<Matrix> exog_future;

    void validate() const {
        if (horizon < 1) throw ConfigError("horizon must be >= 1");
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (!(levels[i] > 0.0 && levels[i] < 100.0)) {
                throw ConfigError("level " + std::to_string(levels[i]) + " outside (0, 100)");
            }
            if (i > 0 && !(levels[i] > levels[i - 1])) throw ConfigError("levels must be strictly increasing");
        }
        if (exog_future && exog_future->rows() != static_cast<std::size_t>(horizon)) {
            throw ConfigError("exog_future must have one row per horizon step");
        }
    }
};

/// Shortest round-trip text of a coverage level: 80 -> "80", 97.5 -> "97.5".
inline std::string format_level(double level) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, level);
    return std::string(buf, res.ptr);
}

/// Output column name, e.g. interval_key("lo", 80) == "lo-80".
inline std::string interval_key(std::string_view side, double level) {
    return std::string(side) + "-" + format_level(level);
}

struct IntervalBand {
    double level;
    std::vector<double> lo;
    std::vector<double> hi;

    friend bool operator==(const IntervalBand&, const IntervalBand&) = default;
};

struct ForecastResult {
    std::vector<double> mean;
    /// One band per requested level, in request order.
    std::vector<IntervalBand> intervals;
    std::vector<double> fitted;
    std::vector<std::string> warnings;

    /// Looks up "mean", "lo-{level}" or "hi-{level}".
    const std::vector<double>* find(std::string_view key) const {
        if (key == "mean") return &mean;
        for (const auto& band : intervals) {
            if (key == interval_key("lo", band.level)) return &band.lo;
            if (key == interval_key("hi", band.level)) return &band.hi;
        }
        return nullptr;
    }

    /// Ordered (key, values) pairs: mean, then lo/hi per level.
    std::vector<std::pair<std::string, const std::vector<double>*>> columns() const {
        std::vector<std::pair<std::string, const std::vector<double>*>> out{{"mean", &mean}};
        for (const auto& band : intervals) {
            out.emplace_back(interval_key("lo", band.level), &band.lo);
            out.emplace_back(interval_key("hi", band.level), &band.hi);
        }
        return out;
    }

    friend bool operator==(const ForecastResult&, const ForecastResult&) = default;
};

}  // namespace foldcast
