#include <algorithm>
#include <filesystem>
#include <sstream>
#include <string>

#include "catch_amalgamated.hpp"

#include "foldcast/io/csv.hpp"
#include "foldcast/io/json.hpp"

using namespace foldcast;
using namespace foldcast::io;

namespace {

Dataset parse(const std::string& text) {
    std::istringstream in(text);
    return parse_csv(in);
}

void expect_error(const std::string& text, CsvError::Kind kind, std::size_t line) {
    try {
        parse(text);
        FAIL("expected CsvError");
    } catch (const CsvError& e) {
        CHECK(e.kind() == kind);
        CHECK(e.line() == line);
    }
}

}  // namespace

TEST_CASE("AirPassengers loads as one monthly series") {
    const auto ds = ingest_csv(std::string(FOLDCAST_DATA_DIR) + "/air_passengers.csv");
    REQUIRE(ds.size() == 1);
    const auto& y = ds.series[0].values;
    CHECK(ds.series[0].id == "AirPassengers");
    CHECK(y.size() == 144);
    CHECK(*std::min_element(y.begin(), y.end()) == 104);
    CHECK(*std::max_element(y.begin(), y.end()) == 622);
    CHECK(ds.timestamps[0].front() == "1949-01-01");
    CHECK(ds.timestamps[0].back() == "1960-12-01");
}

TEST_CASE("series keep their order of first appearance") {
    const auto ds = parse("unique_id,ds,y\nb,1,10\na,1,5\nb,2,11\na,2,6\na,3,7\n");
    REQUIRE(ds.size() == 2);
    CHECK(ds.series[0].id == "b");
    CHECK(ds.series[0].values == std::vector<double>{10, 11});
    CHECK(ds.series[1].values == std::vector<double>{5, 6, 7});
}

TEST_CASE("a file without identifiers is one series") {
    std::string text = "ds,y\n";
    for (int t = 0; t < 7056; ++t) text += std::to_string(t) + "," + std::to_string(t % 24) + "\n";
    CsvOptions o;
    o.default_id = "hourly";
    std::istringstream in(text);
    const auto ds = parse_csv(in, "mem", o);
    REQUIRE(ds.size() == 1);
    CHECK(ds.series[0].id == "hourly");
    CHECK(ds.series[0].size() == 7056);
}

TEST_CASE("numeric timestamps order numerically") {
    CHECK_NOTHROW(parse("ds,y\n9,1\n10,2\n100,3\n"));
}

TEST_CASE("CSV errors name the kind and line") {
    expect_error("unique_id,ds\na,1\n", CsvError::Kind::MissingColumn, 1);
    expect_error("unique_id,y\na,1\n", CsvError::Kind::MissingColumn, 1);
    expect_error("ds,y\n1,2\n2,abc\n", CsvError::Kind::NonNumeric, 3);
    expect_error("ds,y\n1,2\n2,3\n2,4\n", CsvError::Kind::DuplicateTimestamp, 4);
    expect_error("ds,y\n1,2\n3,3\n1,4\n", CsvError::Kind::DuplicateTimestamp, 4);
    expect_error("ds,y\n1,2\n3,3\n2,4\n", CsvError::Kind::OutOfOrder, 4);
    expect_error("ds,y\n1,2\n2,3,4\n", CsvError::Kind::Malformed, 3);
    expect_error("ds,y,x\n1,2,3\n2,3,?\n", CsvError::Kind::NonNumeric, 3);
    CHECK_THROWS_AS(ingest_csv("/nonexistent/file.csv"), DataError);
}

TEST_CASE("quoted fields and blank lines") {
    const auto ds = parse("unique_id,ds,y\n\"a,1\",\"2020-01-01\",3.5\n\n\"a,1\",2020-01-02,4\n");
    REQUIRE(ds.size() == 1);
    CHECK(ds.series[0].id == "a,1");
    CHECK(ds.series[0].values == std::vector<double>{3.5, 4});
}

TEST_CASE("columns after y become regressors") {
    const auto ds = parse("unique_id,ds,y,price,promo\na,1,10,2.5,0\na,2,11,2.25,1\n");
    CHECK(ds.exog_names == std::vector<std::string>{"price", "promo"});
    REQUIRE(ds.series[0].exog);
    CHECK(ds.series[0].exog->rows() == 2);
    CHECK((*ds.series[0].exog)(1, 0) == 2.25);
    CHECK((*ds.series[0].exog)(1, 1) == 1.0);
}

TEST_CASE("write then read round-trips exactly") {
    const auto ds = parse("unique_id,ds,y,x\na,1,0.1,3\na,2,1e-300,4\nb,7,-2.718281828459045,5\n");
    std::ostringstream out;
    write_csv(out, ds);
    const auto back = parse(out.str());
    REQUIRE(back.size() == ds.size());
    for (std::size_t s = 0; s < ds.size(); ++s) {
        CHECK(back.series[s].id == ds.series[s].id);
        CHECK(back.series[s].values == ds.series[s].values);
        CHECK(back.timestamps[s] == ds.timestamps[s]);
        CHECK(*back.series[s].exog == *ds.series[s].exog);
    }

    const auto path = std::filesystem::temp_directory_path() / "foldcast_io_roundtrip.csv";
    write_csv(path.string(), ds);
    CHECK(ingest_csv(path.string()).series[1].values == ds.series[1].values);
    std::filesystem::remove(path);
}

TEST_CASE("forecast JSON layout") {
    ForecastResult r;
    r.mean = {3, 3};
    r.intervals.push_back({80, {2, 1}, {4, 5}});
    const auto j = forecast_to_json("s0", r);
    CHECK(j.dump() == R"({"unique_id":"s0","mean":[3.0,3.0],"lo-80":[2.0,1.0],"hi-80":[4.0,5.0]})");
    const std::vector<std::string> ids{"a", "b"};
    const std::vector<ForecastResult> rs{r, r};
    CHECK(forecasts_to_json(ids, rs).size() == 2);
}
