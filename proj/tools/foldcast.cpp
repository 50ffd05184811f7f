// foldcast command-line tool.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 model error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "foldcast/foldcast.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitModel = 4;

std::vector<double> parse_levels(const std::string& text) {
    std::vector<double> levels;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto v = foldcast::io::detail::parse_double(item);
        if (!v) throw foldcast::ConfigError("invalid level '" + item + "'");
        levels.push_back(*v);
    }
    return levels;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw foldcast::DataError("cannot write '" + path + "'");
    out << text;
}

int classify(std::exception_ptr error) {
    try {
        std::rethrow_exception(foldcast::innermost_exception(error));
    } catch (const CLI::Error&) {
        return kExitUsage;
    } catch (const foldcast::ConfigError&) {
        return kExitUsage;
    } catch (const foldcast::DataError&) {
        return kExitData;
    } catch (const foldcast::LengthError&) {
        return kExitData;
    } catch (const std::filesystem::filesystem_error&) {
        return kExitData;
    } catch (...) {
        return kExitModel;
    }
}

void print_error(const std::exception& e, int depth = 0) {
    std::cerr << (depth == 0 ? "error: " : "  caused by: ") << e.what() << '\n';
    try {
        std::rethrow_if_nested(e);
    } catch (const std::exception& inner) {
        print_error(inner, depth + 1);
    } catch (...) {
    }
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"foldcast: scan-based statistical forecasting"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print this help message and exit");

    foldcast::ModelOptions model_options;
    std::size_t workers = 0;

    // forecast
    auto* fc = app.add_subcommand("forecast", "Forecast every series of a CSV file");
    std::string fc_model, fc_input, fc_output, fc_levels, fc_method = "symmetric";
    int fc_h = 0;
    int fc_windows = 0;
    fc->add_option("--model", fc_model, "Model name")->required();
    fc->add_option("--input", fc_input, "Long-format CSV")->required()->check(CLI::ExistingFile);
    fc->add_option("--h", fc_h, "Forecast horizon")->required()->check(CLI::PositiveNumber);
    fc->add_option("--season-length", model_options.season_length, "Season length")->check(CLI::PositiveNumber);
    fc->add_option("--window", model_options.window, "Averaging window")->check(CLI::PositiveNumber);
    fc->add_option("--level", fc_levels, "Coverage levels, e.g. 80,95");
    fc->add_option("--conformal-windows", fc_windows, "Calibration windows K (enables conformal intervals)");
    fc->add_option("--conformal-method", fc_method, "symmetric or signed")
        ->check(CLI::IsMember({"symmetric", "signed"}));
    fc->add_option("--output", fc_output, "Output JSON path (stdout when omitted)");
    fc->add_option("--workers", workers, "Worker threads (0 = all cores)");

    // bench
    auto* bc = app.add_subcommand("bench", "Cold/warm benchmark with holdout accuracy");
    std::string bc_models = "all", bc_output = "bench-out", bc_synthetic;
    std::vector<std::string> bc_inputs;
    foldcast::bench::BenchConfig bench_config;
    std::size_t bc_length = 7056;
    bc->add_option("--models", bc_models, "Comma list of models or 'all'");
    bc->add_option("--input", bc_inputs, "Long-format CSV (repeatable)")->check(CLI::ExistingFile);
    bc->add_option("--synthetic", bc_synthetic, "Generate a dataset instead: seasonal|random_walk|intermittent|gaussian");
    bc->add_option("--length", bc_length, "Synthetic series length")->check(CLI::PositiveNumber);
    bc->add_option("--h", bench_config.horizon, "Holdout length")->check(CLI::PositiveNumber);
    bc->add_option("--warm-iters", bench_config.warm_iters, "Warm repetitions")->check(CLI::PositiveNumber);
    bc->add_option("--seed", bench_config.seed, "Seed for synthetic data");
    bc->add_option("--season-length", model_options.season_length, "Season length")->check(CLI::PositiveNumber);
    bc->add_option("--window", model_options.window, "Averaging window")->check(CLI::PositiveNumber);
    bc->add_option("--output", bc_output, "Directory for report.json and report.csv");

    // conformal-cv
    auto* cv = app.add_subcommand("conformal-cv", "Dump walk-forward conformity scores");
    std::string cv_model, cv_input, cv_output;
    foldcast::ConformalConfig cv_config;
    cv->add_option("--model", cv_model, "Model name")->required();
    cv->add_option("--input", cv_input, "Long-format CSV")->required()->check(CLI::ExistingFile);
    cv->add_option("--windows", cv_config.n_windows, "Calibration windows K")->required();
    cv->add_option("--h", cv_config.h, "Horizon per window")->required()->check(CLI::PositiveNumber);
    cv->add_option("--season-length", model_options.season_length, "Season length")->check(CLI::PositiveNumber);
    cv->add_option("--window", model_options.window, "Averaging window")->check(CLI::PositiveNumber);
    cv->add_option("--output", cv_output, "Output CSV path (stdout when omitted)");
    cv->add_option("--workers", workers, "Worker threads (0 = all cores)");

    // synth
    auto* sy = app.add_subcommand("synth", "Write a synthetic long-format CSV (mt19937_64)");
    std::string sy_kind = "seasonal", sy_output;
    foldcast::synth::SynthSpec synth_spec;
    sy->add_option("--kind", sy_kind, "seasonal|random_walk|intermittent|gaussian");
    sy->add_option("--series", synth_spec.n_series, "Number of series")->check(CLI::PositiveNumber);
    sy->add_option("--length", synth_spec.length, "Observations per series")->check(CLI::PositiveNumber);
    sy->add_option("--season-length", synth_spec.season_length, "Season length")->check(CLI::PositiveNumber);
    sy->add_option("--seed", synth_spec.seed, "Generator seed");
    sy->add_option("--output", sy_output, "Output CSV path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        const foldcast::BatchOptions batch{.workers = workers};

        if (*fc) {
            const auto dataset = foldcast::io::ingest_csv(fc_input);
            foldcast::Forecaster forecaster{foldcast::make_model(fc_model, model_options), std::nullopt};
            if (fc_windows > 0) {
                forecaster.conformal = foldcast::ConformalConfig{fc_windows, fc_h,
                                                                 foldcast::parse_conformal_method(fc_method)};
            }
            const foldcast::ForecastRequest request{fc_h, parse_levels(fc_levels), std::nullopt};
            const auto results = foldcast::bench::run_forecast(dataset, forecaster, request, batch);
            for (std::size_t i = 0; i < results.size(); ++i) {
                for (const auto& w : results[i].warnings) {
                    std::cerr << "warning: series '" << dataset.series[i].id << "': " << w << '\n';
                }
            }
            write_text(fc_output, foldcast::bench::serialize_forecasts(dataset, results));
        } else if (*bc) {
            if (bc_inputs.empty() == bc_synthetic.empty()) {
                throw foldcast::ConfigError("bench needs exactly one of --input or --synthetic");
            }
            bench_config.model_options = model_options;
            std::vector<foldcast::bench::NamedDataset> datasets;
            for (const auto& path : bc_inputs) datasets.push_back({stem(path), foldcast::io::ingest_csv(path)});
            if (!bc_synthetic.empty()) {
                foldcast::synth::SynthSpec spec;
                spec.kind = foldcast::synth::parse_kind(bc_synthetic);
                spec.length = bc_length;
                spec.season_length = model_options.season_length;
                spec.seed = bench_config.seed;
                datasets.push_back({"synthetic-" + bc_synthetic, foldcast::synth::generate(spec)});
            }
            const auto names = foldcast::parse_model_list(bc_models);
            const auto report = foldcast::bench::run_bench(datasets, names, bench_config);
            foldcast::bench::write_report(report, bc_output);
            foldcast::bench::write_report_csv(std::cout, report);
        } else if (*cv) {
            const auto dataset = foldcast::io::ingest_csv(cv_input);
            const auto model = foldcast::make_model(cv_model, model_options);
            const auto scores = foldcast::bench::run_conformal_cv(dataset, model, cv_config, batch);
            std::ostringstream out;
            foldcast::bench::write_conformal_csv(out, dataset, scores, cv_config);
            write_text(cv_output, out.str());
        } else if (*sy) {
            synth_spec.kind = foldcast::synth::parse_kind(sy_kind);
            std::ostringstream out;
            foldcast::io::write_csv(out, foldcast::synth::generate(synth_spec));
            write_text(sy_output, out.str());
        }
    } catch (const std::exception& e) {
        print_error(e);
        return classify(std::current_exception());
    }
    return kExitOk;
}
