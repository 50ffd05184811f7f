#pragma once

// Independent imperative re-implementations used as test oracles. Nothing
// here calls into the scan-based library code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace oracle {

struct SmoothingParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double phi = 1.0;
};

inline std::vector<double> ses(const std::vector<double>& y, double l0, double alpha) {
    std::vector<double> out;
    double l = l0;
    for (double v : y) {
        out.push_back(l);
        l = alpha * v + (1.0 - alpha) * l;
    }
    return out;
}

inline std::vector<double> holt(const std::vector<double>& y, double l0, double b0, const SmoothingParams& p) {
    std::vector<double> out;
    double l = l0;
    double b = b0;
    for (double v : y) {
        const double pred = l + p.phi * b;
        out.push_back(pred);
        const double l_new = p.alpha * v + (1.0 - p.alpha) * pred;
        b = p.beta * (l_new - l) + (1.0 - p.beta) * p.phi * b;
        l = l_new;
    }
    return out;
}

/// `s0[i]` is the index applied at time i (0-based) for i < m; the index
/// used at time t is the one produced at time t - m.
inline std::vector<double> holt_winters(const std::vector<double>& y, double l0, double b0, std::vector<double> s0,
                                        const SmoothingParams& p) {
    std::vector<double> out;
    std::vector<double> s = std::move(s0);
    double l = l0;
    double b = b0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double s_lag = s[t];
        const double base = l + p.phi * b;
        out.push_back(base * s_lag);
        const double l_new = p.alpha * (y[t] / s_lag) + (1.0 - p.alpha) * base;
        const double s_new = p.gamma == 0.0 ? s_lag : p.gamma * (y[t] / l_new) + (1.0 - p.gamma) * s_lag;
        b = p.beta * (l_new - l) + (1.0 - p.beta) * p.phi * b;
        l = l_new;
        s.push_back(s_new);
    }
    return out;
}

/// Croston one-step forecasts, tracking demand positions directly.
inline std::vector<double> croston(const std::vector<double>& y, double alpha) {
    std::vector<double> out;
    double z = 0.0;
    double p = 1.0;
    int count = 0;
    std::size_t last_position = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        out.push_back(count > 0 ? z / p : 0.0);
        if (y[i] == 0.0) continue;
        const double gap = static_cast<double>(i + 1 - last_position);
        if (count == 0) {
            z = y[i];
            p = gap;
        } else if (count == 1) {
            z = z + alpha * (y[i] - z);
            p = gap;
        } else {
            z = z + alpha * (y[i] - z);
            p = p + alpha * (gap - p);
        }
        last_position = i + 1;
        ++count;
    }
    return out;
}

inline double croston_final(const std::vector<double>& y, double alpha) {
    std::vector<double> ext = y;
    ext.push_back(0.0);
    return croston(ext, alpha).back();
}

inline std::vector<double> tsb(const std::vector<double>& y, double alpha_d, double alpha_p) {
    std::vector<double> out;
    double z = 0.0;
    for (double v : y) {
        if (v != 0.0) {
            z = v;
            break;
        }
    }
    double prob = y.front() != 0.0 ? 1.0 : 0.0;
    for (double v : y) {
        out.push_back(prob * z);
        prob = prob + alpha_p * ((v != 0.0 ? 1.0 : 0.0) - prob);
        if (v != 0.0) z = z + alpha_d * (v - z);
    }
    return out;
}

inline std::vector<double> garch_variances(const std::vector<double>& eps, double omega, double a, double b,
                                           double backcast, double floor = 1e-12) {
    std::vector<double> out;
    double prev_e2 = backcast;
    double prev_s2 = backcast;
    for (double e : eps) {
        const double s2 = std::max(omega + a * prev_e2 + b * prev_s2, floor);
        out.push_back(s2);
        prev_e2 = e * e;
        prev_s2 = s2;
    }
    return out;
}

/// Linear-interpolation quantile on an explicit sorted copy.
inline double quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double g = p * static_cast<double>(v.size() - 1);
    const auto i = static_cast<std::size_t>(g);
    if (i + 1 >= v.size()) return v.back();
    return v[i] + (g - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

inline std::vector<double> normal_series(std::mt19937_64& rng, std::size_t n, double mu = 0.0, double sd = 1.0) {
    std::normal_distribution<double> d(mu, sd);
    std::vector<double> y(n);
    for (auto& v : y) v = d(rng);
    return y;
}

inline std::vector<double> positive_seasonal(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> amp(2.0, 15.0);
    std::uniform_real_distribution<double> slope(-0.1, 0.3);
    const double A = amp(rng);
    const double s = slope(rng);
    std::vector<double> y(n);
    for (std::size_t t = 0; t < n; ++t) {
        y[t] = 50.0 + s * static_cast<double>(t) +
               A * std::sin(2.0 * 3.141592653589793 * static_cast<double>(t) / static_cast<double>(m)) + noise(rng);
    }
    return y;
}

inline std::vector<double> intermittent_series(std::mt19937_64& rng, std::size_t n, double p = 0.3) {
    std::bernoulli_distribution occurs(p);
    std::uniform_int_distribution<int> size(1, 9);
    std::vector<double> y(n);
    for (auto& v : y) v = occurs(rng) ? size(rng) : 0.0;
    return y;
}

}  // namespace oracle
