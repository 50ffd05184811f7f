// Holdout comparison on the monthly airline passenger series.

#include <cstdio>
#include <string>
#include <vector>

#include "foldcast/foldcast.hpp"

#ifndef FOLDCAST_DATA_DIR
#define FOLDCAST_DATA_DIR "data"
#endif

int main(int argc, char** argv) {
    using namespace foldcast;
    const std::string path = argc > 1 ? argv[1] : std::string(FOLDCAST_DATA_DIR) + "/air_passengers.csv";
    const auto data = io::ingest_csv(path);
    const auto& y = data.series.at(0).values;
    constexpr int h = 12;
    const TimeSeries train(data.series[0].id, std::vector<double>(y.begin(), y.end() - h));
    const std::vector<double> test(y.end() - h, y.end());

    const std::vector<Model> models{Naive{}, SeasonalNaive{12}, HistoricAverage{}, Ses{}, Holt{},
                                    HoltWinters{.season_length = 12}, Theta{.season_length = 12}};
    std::printf("%-16s %10s %8s %10s\n", "model", "MAPE", "MASE", "95% cover");
    for (const auto& m : models) {
        const Forecaster spec{m, ConformalConfig{3, h}};
        const auto r = forecast(spec, train, {h, {95}, std::nullopt});
        std::printf("%-16s %10.3f %8.3f %10.3f\n", std::string(model_name(m)).c_str(), metrics::mape(test, r.mean),
                    metrics::mase(test, r.mean), metrics::coverage(test, r.intervals[0].lo, r.intervals[0].hi));
    }
}
