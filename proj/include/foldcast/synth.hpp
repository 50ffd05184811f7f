#pragma once

// Deterministic synthetic datasets. Every draw comes from std::mt19937_64
// seeded per series with seed_seq{seed, series_index}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "foldcast/error.hpp"
#include "foldcast/io/csv.hpp"

namespace foldcast::synth {

inline constexpr std::string_view kGenerator = "mt19937_64";

enum class Kind { Seasonal, RandomWalk, Intermittent, Gaussian };

inline Kind parse_kind(std::string_view s) {
    if (s == "seasonal") return Kind::Seasonal;
    if (s == "random_walk") return Kind::RandomWalk;
    if (s == "intermittent") return Kind::Intermittent;
    if (s == "gaussian") return Kind::Gaussian;
    throw ConfigError("unknown synthetic kind '" + std::string(s) + "'");
}

struct SynthSpec {
    Kind kind = Kind::Seasonal;
    std::size_t n_series = 1;
    /// Defaults to the hourly scale of the largest benchmark dataset.
    std::size_t length = 7056;
    int season_length = 24;
    std::uint64_t seed = 0;
};

inline std::mt19937_64 series_engine(std::uint64_t seed, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    return std::mt19937_64(seq);
}

/// Values of one series.
inline std::vector<double> generate_values(const SynthSpec& spec, std::size_t index) {
    auto rng = series_engine(spec.seed, index);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> y(spec.length);
    switch (spec.kind) {
        case Kind::Seasonal: {
            const double m = static_cast<double>(std::max(spec.season_length, 1));
            const double phase = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
            for (std::size_t t = 0; t < y.size(); ++t) {
                const double angle = 2.0 * std::numbers::pi * static_cast<double>(t) / m + phase;
                y[t] = 50.0 + 0.001 * static_cast<double>(t) + 10.0 * std::sin(angle) + noise(rng);
            }
            break;
        }
        case Kind::RandomWalk: {
            double level = 100.0;
            for (auto& v : y) {
                level += noise(rng);
                v = level;
            }
            break;
        }
        case Kind::Intermittent: {
            std::bernoulli_distribution occurs(0.3);
            std::poisson_distribution<int> size(3.0);
            for (auto& v : y) v = occurs(rng) ? 1.0 + size(rng) : 0.0;
            if (!y.empty() && std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; })) y.back() = 1.0;
            break;
        }
        case Kind::Gaussian:
            for (auto& v : y) v = 10.0 + noise(rng);
            break;
    }
    return y;
}

/// Series "s0", "s1", ... with integer timestamps "0".."length-1".
inline io::Dataset generate(const SynthSpec& spec) {
    if (spec.n_series == 0 || spec.length == 0) throw ConfigError("synthetic dataset must be non-empty");
    io::Dataset ds;
    ds.source = "synthetic:" + std::string(kGenerator) + ":" + std::to_string(spec.seed);
    std::vector<std::string> stamps(spec.length);
    for (std::size_t t = 0; t < spec.length; ++t) stamps[t] = std::to_string(t);
    for (std::size_t s = 0; s < spec.n_series; ++s) {
        ds.series.emplace_back("s" + std::to_string(s), generate_values(spec, s));
        ds.timestamps.push_back(stamps);
    }
    return ds;
}

}  // namespace foldcast::synth
