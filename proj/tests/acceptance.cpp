// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. `acceptance 4 7` runs a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "foldcast/foldcast.hpp"
#include "oracles.hpp"

namespace fc = foldcast;
namespace fm = foldcast::models;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// 1. Window partition.
Outcome partition_exactness() {
    const auto cuts = fc::partition_windows(14, 3, 4);
    if (cuts != std::vector<std::size_t>{2, 6, 10}) return {false, "partition_windows(14,3,4) != {2,6,10}"};
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t K = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
        const std::size_t h = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
        const std::size_t T = K * h + std::uniform_int_distribution<std::size_t>(1, 500)(rng);
        const auto c = fc::partition_windows(T, K, h);
        if (c.size() != K) return {false, "wrong number of cuts"};
        for (std::size_t w = 1; w <= K; ++w) {
            if (c[w - 1] != T - (K + 1 - w) * h) return {false, fmt("formula mismatch at T=%zu K=%zu h=%zu", T, K, h)};
            if (c[w - 1] < 1) return {false, "empty training prefix"};
            // Block w covers (c_w, c_w + h]; it must end where block w+1 starts.
            const std::size_t block_end = c[w - 1] + h;
            if (w < K && block_end != c[w]) return {false, "calibration blocks overlap or leave gaps"};
            if (w == K && block_end != T) return {false, "last block does not end at T"};
        }
    }
    return {true, "{2,6,10}; 1000 random (T,K,h) triples"};
}

// 2. Scan recursions against imperative loops.
Outcome scan_oracles() {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unit(0.01, 0.99);
    std::uniform_real_distribution<double> damp(0.8, 1.0);
    double worst = 0.0;
    std::vector<std::string> parts;

    double w_hw = 0.0, w_ses = 0.0, w_holt = 0.0, w_cr = 0.0, w_tsb = 0.0, w_garch = 0.0;
    for (int draw = 0; draw < 200; ++draw) {
        const int m = std::uniform_int_distribution<int>(2, 12)(rng);
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2 * m, 120)(rng);
        const auto y = oracle::positive_seasonal(rng, n, static_cast<std::size_t>(m));
        const oracle::SmoothingParams p{unit(rng), unit(rng), unit(rng), damp(rng)};

        auto init = fm::initial_state(fm::SmoothingKind::HoltWinters, y, m, p.phi);
        auto run = fm::smoothing_scan(fm::SmoothingKind::HoltWinters, fm::lift_carry(init, p.alpha, p.beta, p.gamma),
                                      std::span<const double>(y));
        w_hw = std::max(w_hw, max_abs_diff(run.outputs, oracle::holt_winters(y, init.level, init.trend,
                                                                               init.seasonal.to_vector(), p)));

        const auto ys = oracle::normal_series(rng, n, 20.0, 3.0);
        auto si = fm::initial_state(fm::SmoothingKind::Ses, ys, 1);
        auto sr = fm::smoothing_scan(fm::SmoothingKind::Ses, fm::lift_carry(si, p.alpha, 0.0, 0.0),
                                     std::span<const double>(ys));
        w_ses = std::max(w_ses, max_abs_diff(sr.outputs, oracle::ses(ys, si.level, p.alpha)));

        auto hi = fm::initial_state(fm::SmoothingKind::Holt, ys, 1, p.phi);
        auto hr = fm::smoothing_scan(fm::SmoothingKind::Holt, fm::lift_carry(hi, p.alpha, p.beta, 0.0),
                                     std::span<const double>(ys));
        w_holt = std::max(w_holt, max_abs_diff(hr.outputs, oracle::holt(ys, hi.level, hi.trend, p)));

        auto yi = oracle::intermittent_series(rng, n);
        yi[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = 3.0;
        const auto cf = fm::fit_croston(yi, p.alpha);
        w_cr = std::max(w_cr, max_abs_diff(cf.fitted, oracle::croston(yi, p.alpha)));
        w_cr = std::max(w_cr, std::abs(cf.forecast - oracle::croston_final(yi, p.alpha)));
        const auto tf = fm::fit_tsb(yi, p.alpha, p.beta);
        w_tsb = std::max(w_tsb, max_abs_diff(tf.fitted, oracle::tsb(yi, p.alpha, p.beta)));

        const auto eps = oracle::normal_series(rng, n, 0.0, 2.0);
        const double omega = unit(rng);
        const double a = 0.5 * unit(rng);
        const double b = 0.45 * unit(rng);
        const auto gv = fm::garch_variances<double>(omega, a, b, eps, 4.0);
        w_garch = std::max(w_garch, max_abs_diff(gv, oracle::garch_variances(eps, omega, a, b, 4.0)));
    }
    worst = std::max({w_hw, w_ses, w_holt, w_cr, w_tsb, w_garch});
    return {worst <= 1e-12,
            fmt("max |diff| HW %.1e SES %.1e Holt %.1e Croston %.1e TSB %.1e GARCH %.1e (200 draws each)", w_hw,
                w_ses, w_holt, w_cr, w_tsb, w_garch)};
}

// 3. Dual-number gradients against central differences.
Outcome gradient_check() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> interior(0.05, 0.95);
    constexpr double h = 1e-6;
    double worst = 0.0;
    for (int point = 0; point < 100; ++point) {
        const auto y = oracle::positive_seasonal(rng, 48, 12);
        const auto init = fm::initial_state(fm::SmoothingKind::HoltWinters, y, 12);
        auto objective = [&]<class T>(std::span<const T> p) {
            return fm::sse_objective<T>(fm::SmoothingKind::HoltWinters, {p[0], p[1], p[2]}, init, y);
        };
        const std::vector<double> x{interior(rng), interior(rng), interior(rng)};
        const auto g = fc::grad(objective, x);
        for (std::size_t i = 0; i < 3; ++i) {
            auto up = x;
            auto down = x;
            up[i] += h;
            down[i] -= h;
            const double fd = (objective(std::span<const double>(up)) - objective(std::span<const double>(down))) /
                              (2.0 * h);
            const double rel = std::abs(g.gradient[i] - fd) / std::max(std::abs(fd), 1e-8);
            worst = std::max(worst, rel);
        }
    }
    return {worst <= 1e-4, fmt("max relative error %.2e over 100 points x 3 parameters", worst)};
}

// 4. Conformal coverage.
Outcome conformal_coverage() {
    std::mt19937_64 rng(4);
    const int trials = 2000;
    const std::vector<double> levels{80.0};
    double cov[2] = {0.0, 0.0};
    const fc::ConformalMethod methods[2] = {fc::ConformalMethod::Symmetric, fc::ConformalMethod::Signed};
    for (int m = 0; m < 2; ++m) {
        int inside = 0;
        const fc::Forecaster spec{fc::HistoricAverage{}, fc::ConformalConfig{50, 1, methods[m]}};
        for (int trial = 0; trial < trials; ++trial) {
            auto y = oracle::normal_series(rng, 101, 10.0, 1.0);
            const double future = y.back();
            y.pop_back();
            const auto r = fc::forecast(spec, fc::TimeSeries(y), fc::ForecastRequest{1, levels, std::nullopt});
            if (r.intervals[0].lo[0] <= future && future <= r.intervals[0].hi[0]) ++inside;
        }
        cov[m] = static_cast<double>(inside) / trials;
    }
    const bool ok = cov[0] >= 0.75 && cov[0] <= 0.85 && cov[1] >= 0.75 && cov[1] <= 0.85;
    return {ok, fmt("symmetric %.4f, signed %.4f over %d trials (K=50, h=1, level 80)", cov[0], cov[1], trials)};
}

// 5. Symmetric identity and nesting.
Outcome symmetric_identity() {
    std::mt19937_64 rng(5);
    const std::vector<double> levels{50.0, 80.0, 90.0, 95.0, 99.0};
    std::size_t checks = 0;
    for (int i = 0; i < 500; ++i) {
        const std::size_t K = std::uniform_int_distribution<std::size_t>(2, 60)(rng);
        const std::size_t h = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
        const double scale = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
        fc::Matrix scores(K, h);
        std::normal_distribution<double> noise(0.0, scale);
        for (auto& v : scores.data()) v = noise(rng);
        const fc::ConformityMatrix cm(scores);
        fc::ForecastResult base;
        std::uniform_real_distribution<double> point(10.0, 1000.0);
        for (std::size_t k = 0; k < h; ++k) base.mean.push_back(point(rng));

        for (auto method : {fc::ConformalMethod::Symmetric, fc::ConformalMethod::Signed}) {
            const auto r = fc::add_confidence_intervals(base, cm, levels, method);
            for (std::size_t l = 0; l < levels.size(); ++l) {
                const auto& band = r.intervals[l];
                for (std::size_t k = 0; k < h; ++k) {
                    if (method == fc::ConformalMethod::Symmetric && band.lo[k] + band.hi[k] != 2.0 * r.mean[k]) {
                        return {false, fmt("lo + hi != 2*mean at matrix %d step %zu level %g", i, k, levels[l])};
                    }
                    if (l > 0) {
                        const auto& inner = r.intervals[l - 1];
                        if (band.lo[k] > inner.lo[k] || band.hi[k] < inner.hi[k]) {
                            return {false, fmt("nesting violated at matrix %d step %zu", i, k)};
                        }
                    }
                    ++checks;
                }
            }
        }
    }
    return {true, fmt("500 matrices, %zu (step, level, method) checks", checks)};
}

// 6. Metric identities.
Outcome metric_identities() {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> d(0.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 50)(rng);
        std::vector<double> a(n), b(n);
        for (std::size_t j = 0; j < n; ++j) {
            a[j] = d(rng);
            b[j] = d(rng);
        }
        const double mae = fc::metrics::mae(a, b);
        if (fc::metrics::rmse(a, b) < mae) return {false, "RMSE < MAE"};
        if (fc::metrics::quantile_loss(a, b, 0.5) != 0.5 * mae) return {false, "quantile_loss(0.5) != 0.5*MAE"};
        const double s = fc::metrics::smape(a, b);
        if (!(s >= 0.0 && s <= 200.0)) return {false, "SMAPE outside [0, 200]"};
    }
    const std::vector<double> t{1, 2, 4}, p{2, 2, 2};
    const double mase = fc::metrics::mase(t, p);
    if (std::abs(mase - 2.0 / 3.0) > 1e-12) return {false, fmt("MASE hand example %.17g", mase)};
    const std::vector<double> mt{100, 200}, mp{110, 180};
    const double mape = fc::metrics::mape(mt, mp);
    if (std::abs(mape - 10.0) > 1e-12) return {false, fmt("MAPE hand example %.17g", mape)};
    return {true, "1000 pairs: RMSE>=MAE, pinball(0.5)=MAE/2 bitwise, SMAPE<=200; MASE 2/3; MAPE 10"};
}

// 7. Benchmark protocol.
Outcome bench_protocol() {
    const fc::bench::BenchConfig defaults;
    if (defaults.horizon != 24 || defaults.warm_iters != 5) return {false, "defaults differ from H=24, N=5"};

    fc::synth::SynthSpec spec;
    spec.seed = 7;
    const std::vector<fc::bench::NamedDataset> data{{"hourly", fc::synth::generate(spec)}};
    if (data[0].data.series[0].size() != 7056) return {false, "synthetic series is not 7056 points"};
    const auto names = fc::parse_model_list("all");

    fc::bench::BenchConfig config;
    config.model_options.season_length = 24;
    const int reps = 20;
    std::map<std::string, int> wins;
    std::map<std::string, std::vector<double>> ratios;
    std::optional<fc::bench::BenchReport> first;
    for (int rep = 0; rep < reps; ++rep) {
        auto report = fc::bench::run_bench(data, names, config);
        if (!fc::bench::preparation_precedes_timing(report)) return {false, "data preparation inside timing loop"};
        for (const auto& cell : report.cells) {
            if (cell.status != "ok") return {false, "model " + cell.model + " failed: " + cell.notes.front()};
            if (cell.warm_samples.size() != 5) return {false, "warm sample count != 5"};
            if (cell.t_warm <= cell.t_cold) ++wins[cell.model];
            ratios[cell.model].push_back(cell.t_warm / cell.t_cold);
        }
        if (!first) {
            first = std::move(report);
        } else {
            for (std::size_t c = 0; c < report.cells.size(); ++c) {
                const auto& x = report.cells[c];
                const auto& y = first->cells[c];
                if (x.mape != y.mape || x.mae != y.mae || x.rmse != y.rmse || x.mase != y.mase) {
                    return {false, "accuracy differs between repeated runs for " + x.model};
                }
            }
        }
    }
    std::string detail = "H=24, N=5, prep before timing, metrics repeatable; warm<=cold wins/20 (median warm/cold):";
    bool ok = true;
    for (const auto& name : names) {
        const int w = wins[name];
        if (w < 19) ok = false;
        auto& r = ratios[name];
        std::nth_element(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(r.size() / 2), r.end());
        detail += fmt(" %s=%d(%.3f)", name.c_str(), w, r[r.size() / 2]);
    }
    return {ok, detail};
}

// 8. AirPassengers accuracy.
Outcome air_passengers() {
    const auto ds = fc::io::ingest_csv(std::string(FOLDCAST_DATA_DIR) + "/air_passengers.csv");
    const auto& y = ds.series.at(0).values;
    if (y.size() != 144) return {false, "AirPassengers does not have 144 points"};
    const std::vector<double> train(y.begin(), y.end() - 24);
    const std::vector<double> test(y.end() - 24, y.end());
    auto score = [&](const fc::Model& m) {
        const auto pred = fc::forecast_mean(m, fc::TimeSeries(train), 24);
        return std::pair{fc::metrics::mape(test, pred), fc::metrics::mase(test, pred)};
    };
    const auto hw = score(fc::HoltWinters{.season_length = 12});
    const auto naive = score(fc::Naive{});
    const auto theta = score(fc::Theta{.season_length = 12});
    const auto ha = score(fc::HistoricAverage{});
    const bool ok = hw.first < naive.first && hw.second < naive.second && theta.first < ha.first;
    return {ok, fmt("MAPE/MASE HW %.2f/%.3f vs Naive %.2f/%.3f; MAPE Theta %.2f vs HistoricAverage %.2f", hw.first,
                    hw.second, naive.first, naive.second, theta.first, ha.first)};
}

// 9. Batch determinism.
Outcome batch_determinism() {
    fc::synth::SynthSpec spec;
    spec.n_series = 1000;
    spec.length = 96;
    spec.season_length = 12;
    spec.seed = 9;
    const auto ds = fc::synth::generate(spec);
    const fc::ForecastRequest request{12, {80.0, 95.0}, std::nullopt};
    std::size_t bytes = 0;
    for (const fc::Forecaster& f : {fc::Forecaster{fc::Ses{}, fc::ConformalConfig{3, 12}},
                                    fc::Forecaster{fc::HoltWinters{.season_length = 12}, std::nullopt}}) {
        fc::ForecastRequest req = request;
        if (!f.conformal) req.levels.clear();
        const std::string reference =
            fc::bench::serialize_forecasts(ds, fc::bench::run_forecast_sequential(ds, f, req));
        bytes += reference.size();
        for (std::size_t workers : {1u, 2u, 3u, 4u, 8u}) {
            const std::string got =
                fc::bench::serialize_forecasts(ds, fc::bench::run_forecast(ds, f, req, {.workers = workers}));
            if (got != reference) return {false, fmt("output differs with %zu workers", workers)};
        }
    }
    return {true, fmt("1000 series, workers {1,2,3,4,8}, %zu bytes compared per run", bytes)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"window-partition exactness", partition_exactness},
        {"scan-oracle equivalence", scan_oracles},
        {"gradient correctness", gradient_check},
        {"conformal coverage", conformal_coverage},
        {"symmetric-interval identity and nesting", symmetric_identity},
        {"metric identity suite", metric_identities},
        {"benchmark-protocol fidelity", bench_protocol},
        {"accuracy sanity on AirPassengers", air_passengers},
        {"batch determinism", batch_determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!selected.empty() && !selected.contains(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!out.pass) ++failures;
        std::printf("%s [%d] %s: %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    out.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
