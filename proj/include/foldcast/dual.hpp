#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>

namespace foldcast {

/**
 * Forward-mode dual number carrying a value and N partial derivatives.
 *
 * Parameter vectors in this library are tiny (at most a handful of smoothing
 * or variance parameters), so one forward pass with N tangents yields the
 * full gradient exactly.
 */
template <std::size_t N>
class Dual {
public:
    static constexpr std::size_t size = N;

    constexpr Dual() = default;
    constexpr Dual(double value) : value_(value) {}  // NOLINT: implicit lift of constants

    /// Independent variable `index` of the parameter vector.
    static constexpr Dual variable(double value, std::size_t index) {
        Dual d(value);
        d.tangent_[index] = 1.0;
        return d;
    }

    constexpr double value() const noexcept { return value_; }
    constexpr double tangent(std::size_t i) const noexcept { return tangent_[i]; }
    constexpr const std::array<double, N>& tangents() const noexcept { return tangent_; }

    constexpr Dual& operator+=(const Dual& o) {
        value_ += o.value_;
        for (std::size_t i = 0; i < N; ++i) tangent_[i] += o.tangent_[i];
        return *this;
    }
    constexpr Dual& operator-=(const Dual& o) {
        value_ -= o.value_;
        for (std::size_t i = 0; i < N; ++i) tangent_[i] -= o.tangent_[i];
        return *this;
    }
    constexpr Dual& operator*=(const Dual& o) {
        for (std::size_t i = 0; i < N; ++i) tangent_[i] = tangent_[i] * o.value_ + value_ * o.tangent_[i];
        value_ *= o.value_;
        return *this;
    }
    constexpr Dual& operator/=(const Dual& o) {
        const double inv = 1.0 / o.value_;
        const double q = value_ * inv;
        for (std::size_t i = 0; i < N; ++i) tangent_[i] = (tangent_[i] - q * o.tangent_[i]) * inv;
        value_ = q;
        return *this;
    }

    friend constexpr Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend constexpr Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend constexpr Dual operator*(Dual a, const Dual& b) { return a *= b; }
    friend constexpr Dual operator/(Dual a, const Dual& b) { return a /= b; }

    friend constexpr Dual operator-(Dual a) {
        a.value_ = -a.value_;
        for (auto& t : a.tangent_) t = -t;
        return a;
    }

    // Comparisons look at the value only; branches are not differentiated.
    friend constexpr bool operator==(const Dual& a, const Dual& b) { return a.value_ == b.value_; }
    friend constexpr auto operator<=>(const Dual& a, const Dual& b) { return a.value_ <=> b.value_; }

private:
    // Applies a scalar function with known derivative.
    template <std::size_t M>
    friend Dual<M> chain(const Dual<M>& x, double fx, double dfx);

    double value_ = 0.0;
    std::array<double, N> tangent_{};
};

template <std::size_t N>
Dual<N> chain(const Dual<N>& x, double fx, double dfx) {
    Dual<N> r(fx);
    for (std::size_t i = 0; i < N; ++i) r.tangent_[i] = dfx * x.tangent_[i];
    return r;
}

template <std::size_t N>
Dual<N> log(const Dual<N>& x) {
    return chain(x, std::log(x.value()), 1.0 / x.value());
}

template <std::size_t N>
Dual<N> exp(const Dual<N>& x) {
    const double e = std::exp(x.value());
    return chain(x, e, e);
}

template <std::size_t N>
Dual<N> sqrt(const Dual<N>& x) {
    const double s = std::sqrt(x.value());
    return chain(x, s, 0.5 / s);
}

template <std::size_t N>
Dual<N> abs(const Dual<N>& x) {
    return x.value() < 0.0 ? -x : x;
}

template <class T>
struct is_dual : std::false_type {};
template <std::size_t N>
struct is_dual<Dual<N>> : std::true_type {};

/// Scalar types a step function or objective may be evaluated with.
template <class T>
concept Scalar = std::is_same_v<T, double> || is_dual<T>::value;

inline constexpr double value_of(double x) noexcept { return x; }
template <std::size_t N>
constexpr double value_of(const Dual<N>& x) noexcept {
    return x.value();
}

}  // namespace foldcast
