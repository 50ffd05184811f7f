#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "foldcast/error.hpp"

namespace foldcast {

/// Minimal row-major n-d array used by the metrics.
class NdArray {
public:
    NdArray() = default;
    NdArray(std::vector<std::size_t> shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
        if (element_count(shape_) != data_.size()) throw DataError("NdArray: shape does not match data size");
    }
    NdArray(std::vector<std::size_t> shape, double fill)
        : shape_(std::move(shape)), data_(element_count(shape_), fill) {}

    /// 1-d view copy of a sequence.
    static NdArray vector(std::span<const double> v) { return {{v.size()}, {v.begin(), v.end()}}; }
    static NdArray scalar(double v) { return {{}, {v}}; }

    const std::vector<std::size_t>& shape() const noexcept { return shape_; }
    std::size_t ndim() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept { return data_.size(); }
    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    double operator[](std::size_t i) const { return data_[i]; }

    /// Same data with a size-1 axis appended.
    NdArray expand_last() const {
        auto s = shape_;
        s.push_back(1);
        return {std::move(s), data_};
    }

    static std::size_t element_count(const std::vector<std::size_t>& shape) {
        return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
    }

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

/// NumPy broadcast of two shapes; throws DataError when incompatible.
inline std::vector<std::size_t> broadcast_shape(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    const std::size_t n = std::max(a.size(), b.size());
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t da = i < n - a.size() ? 1 : a[i - (n - a.size())];
        const std::size_t db = i < n - b.size() ? 1 : b[i - (n - b.size())];
        if (da != db && da != 1 && db != 1) throw DataError("shapes are not broadcast-compatible");
        out[i] = std::max(da, db);
    }
    return out;
}

/// Materializes `a` at a larger broadcast-compatible shape.
inline NdArray broadcast_to(const NdArray& a, const std::vector<std::size_t>& shape) {
    if (a.shape() == shape) return a;
    const std::size_t n = shape.size();
    const std::size_t offset = n - a.ndim();
    std::vector<std::size_t> strides(n, 0);
    std::size_t stride = 1;
    for (std::size_t i = a.ndim(); i-- > 0;) {
        strides[i + offset] = a.shape()[i] == 1 ? 0 : stride;
        stride *= a.shape()[i];
    }
    std::vector<double> out(NdArray::element_count(shape));
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        std::size_t src = 0;
        for (std::size_t d = 0; d < n; ++d) src += idx[d] * strides[d];
        out[flat] = a[src];
        for (std::size_t d = n; d-- > 0;) {
            if (++idx[d] < shape[d]) break;
            idx[d] = 0;
        }
    }
    return {shape, std::move(out)};
}

/// Elementwise f(a, b) after broadcasting.
template <class F>
NdArray broadcast_apply(const NdArray& a, const NdArray& b, F&& f) {
    const auto shape = broadcast_shape(a.shape(), b.shape());
    const NdArray A = broadcast_to(a, shape);
    const NdArray B = broadcast_to(b, shape);
    std::vector<double> out(A.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(A[i], B[i]);
    return {shape, std::move(out)};
}

}  // namespace foldcast
