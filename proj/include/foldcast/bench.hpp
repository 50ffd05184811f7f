#pragma once

// Batch forecasting, the cold/warm benchmark and conformity-score dumps.

#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "foldcast/conformal.hpp"
#include "foldcast/error.hpp"
#include "foldcast/fold.hpp"
#include "foldcast/forecaster.hpp"
#include "foldcast/io/csv.hpp"
#include "foldcast/io/json.hpp"
#include "foldcast/metrics.hpp"
#include "foldcast/models/registry.hpp"
#include "foldcast/timing.hpp"

namespace foldcast::bench {

/// A failure tied to one series of a dataset. The cause is nested.
class SeriesError : public Error {
public:
    SeriesError(std::string id, const std::string& what)
        : Error("series '" + id + "': " + what), id_(std::move(id)) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

namespace detail {

template <class F>
auto for_series(const std::string& id, F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        std::throw_with_nested(SeriesError(id, e.what()));
    }
}

}  // namespace detail

/// Forecasts every series through batch_map. Results are in dataset order
/// and do not depend on the worker count.
inline std::vector<ForecastResult> run_forecast(const io::Dataset& dataset, const Forecaster& forecaster,
                                                const ForecastRequest& request, BatchOptions batch = {}) {
    request.validate();
    auto one = [&](const TimeSeries& series) {
        return detail::for_series(series.id, [&] { return forecast(forecaster, series, request); });
    };
    return batch_map(one, dataset.series, batch);
}

/// Same results, computed one series at a time on the calling thread.
inline std::vector<ForecastResult> run_forecast_sequential(const io::Dataset& dataset, const Forecaster& forecaster,
                                                           const ForecastRequest& request) {
    request.validate();
    std::vector<ForecastResult> out;
    out.reserve(dataset.size());
    for (const auto& series : dataset.series) {
        out.push_back(detail::for_series(series.id, [&] { return forecast(forecaster, series, request); }));
    }
    return out;
}

inline std::string serialize_forecasts(const io::Dataset& dataset, std::span<const ForecastResult> results) {
    std::vector<std::string> ids;
    ids.reserve(dataset.size());
    for (const auto& s : dataset.series) ids.push_back(s.id);
    return io::forecasts_to_json(ids, results).dump(2) + "\n";
}

struct BenchConfig {
    /// Holdout length.
    int horizon = 24;
    /// Warm repetitions after the cold call.
    int warm_iters = 5;
    std::uint64_t seed = 0;
    ModelOptions model_options;
};

inline constexpr std::string_view kMetricAveraging = "uniform mean of per-series metrics";

struct BenchCell {
    std::string dataset;
    std::string model;
    double t_cold = std::numeric_limits<double>::quiet_NaN();
    double t_warm = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> warm_samples;
    double mape = std::numeric_limits<double>::quiet_NaN();
    double mae = std::numeric_limits<double>::quiet_NaN();
    double rmse = std::numeric_limits<double>::quiet_NaN();
    double mase = std::numeric_limits<double>::quiet_NaN();
    /// "ok" or "failed".
    std::string status = "ok";
    std::vector<std::string> notes;
};

struct BenchReport {
    BenchConfig config;
    std::vector<BenchCell> cells;
    /// Ordered record of harness phases: "prepare:<dataset>", "model:<name>",
    /// "time:<dataset>/<model>", "score:<dataset>/<model>".
    std::vector<std::string> phase_log;
};

struct NamedDataset {
    std::string name;
    io::Dataset data;
};

/// True when every preparation phase precedes the first timing phase.
inline bool preparation_precedes_timing(const BenchReport& report) {
    bool timing_started = false;
    for (const auto& phase : report.phase_log) {
        const bool is_prep = phase.starts_with("prepare:") || phase.starts_with("model:");
        if (phase.starts_with("time:")) timing_started = true;
        if (is_prep && timing_started) return false;
    }
    return true;
}

namespace detail {

struct PreparedDataset {
    std::string name;
    std::vector<TimeSeries> train;
    NdArray test;
};

struct PreparedModel {
    std::string name;
    std::optional<Model> model;
    std::string error;
};

inline std::string message_of(std::exception_ptr ptr) {
    try {
        std::rethrow_exception(ptr);
    } catch (const std::exception& e) {
        return e.what();
    } catch (...) {
        return "unknown error";
    }
}

}  // namespace detail

/**
 * Cold/warm benchmark of each model on each dataset.
 *
 * All splitting and model construction happens before the first timed call.
 * Each timed call forecasts every series of the dataset from its training
 * part; accuracy is scored on the holdout from an untimed rerun. Timing runs
 * serially on one dedicated thread. A failing cell is recorded, not thrown.
 */
inline BenchReport run_bench(std::span<const NamedDataset> datasets, std::span<const std::string> model_names,
                             const BenchConfig& config) {
    if (config.horizon < 1) throw ConfigError("horizon must be >= 1");
    if (config.warm_iters < 1) throw ConfigError("warm_iters must be >= 1");
    BenchReport report;
    report.config = config;
    const auto H = static_cast<std::size_t>(config.horizon);

    std::vector<detail::PreparedDataset> prepared;
    for (const auto& named : datasets) {
        report.phase_log.push_back("prepare:" + named.name);
        detail::PreparedDataset p{named.name, {}, {}};
        std::vector<double> truth;
        for (const auto& series : named.data.series) {
            if (series.size() <= H) {
                throw LengthError("series '" + series.id + "' in " + named.name + " is not longer than the holdout",
                                  H + 1);
            }
            p.train.push_back(series.prefix(series.size() - H));
            truth.insert(truth.end(), series.values.end() - static_cast<std::ptrdiff_t>(H), series.values.end());
        }
        p.test = NdArray({p.train.size(), H}, std::move(truth));
        prepared.push_back(std::move(p));
    }

    std::vector<detail::PreparedModel> models;
    for (const auto& name : model_names) {
        report.phase_log.push_back("model:" + name);
        detail::PreparedModel pm{name, std::nullopt, {}};
        try {
            pm.model = make_model(name, config.model_options);
        } catch (const std::exception& e) {
            pm.error = e.what();
        }
        models.push_back(std::move(pm));
    }

    auto timing_loop = [&] {
        for (const auto& data : prepared) {
            for (const auto& pm : models) {
                BenchCell cell;
                cell.dataset = data.name;
                cell.model = pm.name;
                if (!pm.model) {
                    cell.status = "failed";
                    cell.notes.push_back(pm.error);
                    report.cells.push_back(std::move(cell));
                    continue;
                }
                const Model& model = *pm.model;
                auto fit_predict = [&] {
                    std::vector<std::vector<double>> out;
                    out.reserve(data.train.size());
                    for (const auto& train : data.train) out.push_back(forecast_mean(model, train, config.horizon));
                    return out;
                };
                report.phase_log.push_back("time:" + data.name + "/" + pm.name);
                try {
                    const ColdWarm t = time_cold_warm(fit_predict, config.warm_iters);
                    cell.t_cold = t.cold;
                    cell.t_warm = t.warm;
                    cell.warm_samples = t.warm_samples;
                } catch (...) {
                    cell.status = "failed";
                    cell.notes.push_back(detail::message_of(std::current_exception()));
                    report.cells.push_back(std::move(cell));
                    continue;
                }

                // Forecasts are deterministic, so an untimed rerun scores the same output.
                report.phase_log.push_back("score:" + data.name + "/" + pm.name);
                const auto cold_result = fit_predict();
                std::vector<double> flat;
                for (const auto& row : cold_result) flat.insert(flat.end(), row.begin(), row.end());
                const NdArray pred({cold_result.size(), H}, std::move(flat));
                auto score = [&](const char* label, double& slot, auto fn) {
                    try {
                        slot = fn(data.test, pred);
                    } catch (const std::exception& e) {
                        cell.notes.push_back(std::string(label) + " undefined: " + e.what());
                    }
                };
                score("mape", cell.mape, [](const auto& a, const auto& b) { return metrics::mape(a, b); });
                score("mae", cell.mae, [](const auto& a, const auto& b) { return metrics::mae(a, b); });
                score("rmse", cell.rmse, [](const auto& a, const auto& b) { return metrics::rmse(a, b); });
                score("mase", cell.mase, [](const auto& a, const auto& b) { return metrics::mase(a, b); });
                report.cells.push_back(std::move(cell));
            }
        }
    };

    std::exception_ptr failure;
    {
        std::jthread worker([&] {
            try {
                timing_loop();
            } catch (...) {
                failure = std::current_exception();
            }
        });
    }
    if (failure) std::rethrow_exception(failure);
    return report;
}

namespace detail {

inline nlohmann::ordered_json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

inline std::string csv_number(double v) { return std::isfinite(v) ? io::detail::format_double(v) : std::string(); }

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const BenchReport& report) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["config"] = {{"horizon", report.config.horizon},
                   {"warm_iters", report.config.warm_iters},
                   {"seed", report.config.seed},
                   {"season_length", report.config.model_options.season_length},
                   {"metric_averaging", kMetricAveraging}};
    j["phases"] = report.phase_log;
    auto& rows = j["results"] = nlohmann::ordered_json::array();
    for (const auto& c : report.cells) {
        rows.push_back({{"dataset", c.dataset},
                        {"model", c.model},
                        {"t_cold", detail::number_or_null(c.t_cold)},
                        {"t_warm", detail::number_or_null(c.t_warm)},
                        {"warm_samples", c.warm_samples},
                        {"mape", detail::number_or_null(c.mape)},
                        {"mae", detail::number_or_null(c.mae)},
                        {"rmse", detail::number_or_null(c.rmse)},
                        {"mase", detail::number_or_null(c.mase)},
                        {"status", c.status},
                        {"notes", c.notes}});
    }
    return j;
}

inline void write_report_csv(std::ostream& out, const BenchReport& report) {
    out << "dataset,model,t_cold,t_warm,mape,mae,rmse,mase,status\n";
    for (const auto& c : report.cells) {
        out << detail::csv_field(c.dataset) << ',' << detail::csv_field(c.model) << ',' << detail::csv_number(c.t_cold)
            << ',' << detail::csv_number(c.t_warm) << ',' << detail::csv_number(c.mape) << ','
            << detail::csv_number(c.mae) << ',' << detail::csv_number(c.rmse) << ',' << detail::csv_number(c.mase)
            << ',' << c.status << '\n';
    }
}

/// Writes report.json and report.csv into `dir`, creating it if needed.
inline void write_report(const BenchReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream json(dir / "report.json");
    std::ofstream csv(dir / "report.csv");
    if (!json || !csv) throw DataError("cannot write the report into '" + dir.string() + "'");
    json << report_to_json(report).dump(2) << '\n';
    write_report_csv(csv, report);
}

/// Conformity-score matrix of each series.
inline std::vector<ConformityMatrix> run_conformal_cv(const io::Dataset& dataset, const Model& model,
                                                      const ConformalConfig& config, BatchOptions batch = {}) {
    config.validate();
    auto one = [&](const TimeSeries& series) {
        return detail::for_series(series.id, [&] { return conformity_scores(model, series, config); });
    };
    return batch_map(one, dataset.series, batch);
}

/// Columns unique_id, window, cutoff, h1..hH; cutoff is the last training ds.
inline void write_conformal_csv(std::ostream& out, const io::Dataset& dataset, std::span<const ConformityMatrix> scores,
                                const ConformalConfig& config) {
    out << "unique_id,window,cutoff";
    for (int k = 1; k <= config.h; ++k) out << ",h" << k;
    out << '\n';
    for (std::size_t s = 0; s < scores.size(); ++s) {
        const auto& series = dataset.series[s];
        const auto cuts = partition_windows(series.size(), static_cast<std::size_t>(config.n_windows),
                                            static_cast<std::size_t>(config.h));
        for (std::size_t w = 0; w < scores[s].windows(); ++w) {
            const std::size_t cut = cuts[w];
            const std::string cutoff = s < dataset.timestamps.size() && cut - 1 < dataset.timestamps[s].size()
                                           ? dataset.timestamps[s][cut - 1]
                                           : std::to_string(cut);
            out << detail::csv_field(series.id) << ',' << (w + 1) << ',' << detail::csv_field(cutoff);
            for (std::size_t k = 0; k < scores[s].horizon(); ++k) {
                out << ',' << io::detail::format_double(scores[s](w, k));
            }
            out << '\n';
        }
    }
}

}  // namespace foldcast::bench
