#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "nilmlab/errors.hpp"
#include "nilmlab/ingest.hpp"

using namespace nilm;
namespace fs = std::filesystem;

namespace {

fs::path write_temp_csv(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

WindowPair tagged_pair(double tag) {
    WindowPair p;
    p.kind = PairKind::Regression;
    p.input.assign(510, tag);
    p.target.assign(480, tag);
    return p;
}

CsvParseOptions fridge_options() {
    CsvParseOptions options;
    options.aggregate_column = "agg";
    options.appliance_columns = {"fridge"};
    options.period_seconds = 60;
    return options;
}

}  // namespace

TEST_CASE("parse_power_csv reads mapped columns") {
    const fs::path path = write_temp_csv(
        "nilm_basic.csv", "t,agg,fridge\n0,100,80\n60,120,90\n120,110,85\n");
    const std::vector<PowerSeries> series = parse_power_csv(path, fridge_options());
    REQUIRE(series.size() == 2);
    CHECK(series[0].values == std::vector<double>{100, 120, 110});
    CHECK(series[1].values == std::vector<double>{80, 90, 85});
    CHECK(series[0].label == "agg");
}

TEST_CASE("parse_power_csv forward-fills a missing cell") {
    const fs::path path =
        write_temp_csv("nilm_fill.csv", "t,agg,fridge\n0,100,80\n60,120,\n120,110,85\n");
    ParseReport report;
    const std::vector<PowerSeries> series = parse_power_csv(path, fridge_options(), &report);
    CHECK(series[1].values == std::vector<double>{80, 80, 85});
    CHECK(report.forward_filled == 1);
}

TEST_CASE("parse_power_csv clamps negative readings") {
    const fs::path path =
        write_temp_csv("nilm_neg.csv", "t,agg,fridge\n0,100,-5\n60,120,90\n");
    ParseReport report;
    const std::vector<PowerSeries> series = parse_power_csv(path, fridge_options(), &report);
    CHECK(series[1].values[0] == 0.0);
    CHECK(report.clamped_negative == 1);
}

TEST_CASE("parse_power_csv keeps the longest segment across a long gap") {
    std::string content = "t,agg,fridge\n";
    for (int i = 0; i < 20; ++i) {
        content += std::to_string(i * 60) + ",100,";
        // rows 3..9 leave the fridge column empty: beyond the fill limit of 5
        if (i < 3 || i >= 10) content += "50";
        content += "\n";
    }
    const fs::path path = write_temp_csv("nilm_gap.csv", content);
    ParseReport report;
    const std::vector<PowerSeries> series = parse_power_csv(path, fridge_options(), &report);
    CHECK(series[1].values.size() == 10);  // rows 10..19 survive
    CHECK(report.split_series == 1);
    CHECK(!report.warnings.empty());
}

TEST_CASE("parse_power_csv error paths") {
    CsvParseOptions options = fridge_options();
    options.appliance_columns = {"toaster"};
    const fs::path ok = write_temp_csv("nilm_cols.csv", "t,agg,fridge\n0,1,2\n");
    CHECK_THROWS_AS(parse_power_csv(ok, options), ConfigError);

    const fs::path bad =
        write_temp_csv("nilm_badrow.csv", "t,agg,fridge\n0,100,80\n60,abc,90\n");
    CHECK_THROWS_WITH_AS(parse_power_csv(bad, fridge_options()),
                         doctest::Contains("row 3"), InputError);

    const fs::path uneven =
        write_temp_csv("nilm_stride.csv", "t,agg,fridge\n0,1,1\n60,1,1\n180,1,1\n");
    CHECK_THROWS_AS(parse_power_csv(uneven, fridge_options()), InputError);
}

TEST_CASE("normalize_pair subtracts the window mean and scales") {
    NormalizationSpec spec;  // 2000 W
    WindowPair pair = tagged_pair(0);
    pair.input.assign(510, 2000.0);
    pair.target.assign(480, 1000.0);
    const WindowPair out = normalize_pair(pair, spec);
    CHECK(out.window_mean_watts == 2000.0);
    for (const double v : out.input) CHECK(v == 0.0);
    for (const double v : out.target) CHECK(v == 0.5);
}

TEST_CASE("normalize_pair honors a custom reference") {
    NormalizationSpec spec{1000.0};
    WindowPair pair = tagged_pair(0);
    pair.target.assign(480, 1000.0);
    const WindowPair out = normalize_pair(pair, spec);
    for (const double v : out.target) CHECK(v == 1.0);
}

TEST_CASE("normalize_pair keeps classification targets untouched") {
    WindowPair pair = tagged_pair(1);
    pair.kind = PairKind::Classification;
    const WindowPair out = normalize_pair(pair, NormalizationSpec{});
    for (const double v : out.target) CHECK(v == 1.0);
}

TEST_CASE("normalization round-trips the input") {
    NormalizationSpec spec;
    WindowPair pair = tagged_pair(0);
    for (std::size_t i = 0; i < pair.input.size(); ++i) {
        pair.input[i] = 100.0 + 37.0 * static_cast<double>(i % 11);
    }
    const std::vector<double> original = pair.input;
    const WindowPair normalized = normalize_pair(pair, spec);
    const std::vector<double> restored = denormalize_input(normalized, spec);
    for (std::size_t i = 0; i < original.size(); ++i) {
        CHECK(restored[i] == doctest::Approx(original[i]).epsilon(1e-9));
    }
}

TEST_CASE("chronological_split 80/10/10 of ten windows") {
    std::vector<WindowPair> building;
    for (int i = 0; i < 10; ++i) building.push_back(tagged_pair(i));
    const auto [train, val, test] = chronological_split({building}, SplitFractions{}, 0);
    CHECK(train.pairs.size() == 8);
    REQUIRE(val.pairs.size() == 1);
    REQUIRE(test.pairs.size() == 1);
    CHECK(val.pairs[0].input[0] == 8.0);
    CHECK(test.pairs[0].input[0] == 9.0);
    CHECK(train.split_tag == SplitTag::Train);
}

TEST_CASE("chronological_split across three buildings") {
    std::vector<std::vector<WindowPair>> buildings(3);
    for (int b = 0; b < 3; ++b) {
        for (int i = 0; i < 10; ++i) buildings[b].push_back(tagged_pair(b * 100 + i));
    }
    const auto [train, val, test] = chronological_split(buildings, SplitFractions{}, 0);
    CHECK(train.pairs.size() == 24);
    CHECK(val.pairs.size() == 1);
    CHECK(test.pairs.size() == 1);
    CHECK(val.pairs[0].input[0] == 8.0);  // building 0 only
}

TEST_CASE("chronological_split degenerate all-train") {
    std::vector<WindowPair> building;
    for (int i = 0; i < 10; ++i) building.push_back(tagged_pair(i));
    const auto [train, val, test] =
        chronological_split({building}, SplitFractions{1.0, 0.0, 0.0}, 0);
    CHECK(train.pairs.size() == 10);
    CHECK(val.pairs.empty());
    CHECK(test.pairs.empty());
}

TEST_CASE("chronological_split validates arguments") {
    std::vector<WindowPair> building{tagged_pair(0)};
    CHECK_THROWS_AS(chronological_split({building}, SplitFractions{}, 3), ConfigError);
    CHECK_THROWS_AS(chronological_split({building}, SplitFractions{0.9, 0.2, 0.2}, 0),
                    ConfigError);
}

TEST_CASE("random_split is deterministic and partitions") {
    std::vector<WindowPair> pairs;
    for (int i = 0; i < 100; ++i) pairs.push_back(tagged_pair(i));
    const auto [t1, v1, s1] = random_split(pairs, SplitFractions{}, 99);
    const auto [t2, v2, s2] = random_split(pairs, SplitFractions{}, 99);
    CHECK(t1.pairs.size() == 80);
    CHECK(v1.pairs.size() == 10);
    CHECK(s1.pairs.size() == 10);

    auto tags = [](const Dataset& d) {
        std::vector<double> out;
        for (const auto& p : d.pairs) out.push_back(p.input[0]);
        return out;
    };
    CHECK(tags(t1) == tags(t2));
    CHECK(tags(v1) == tags(v2));
    CHECK(tags(s1) == tags(s2));

    std::multiset<double> all;
    for (const Dataset* d : {&t1, &v1, &s1}) {
        for (const auto& p : d->pairs) all.insert(p.input[0]);
    }
    CHECK(all.size() == 100);
    for (int i = 0; i < 100; ++i) CHECK(all.count(i) == 1);
}

TEST_CASE("activation_fraction percentages") {
    Dataset all_on;
    WindowPair p = tagged_pair(1);
    p.kind = PairKind::Classification;
    all_on.pairs = {p, p};
    CHECK(activation_fraction(all_on) == 100.0);

    Dataset half;
    WindowPair q = p;
    for (std::size_t i = 0; i < q.target.size(); i += 2) q.target[i] = 0.0;
    half.pairs = {q};
    CHECK(activation_fraction(half) == 50.0);

    Dataset empty;
    CHECK_THROWS_AS(activation_fraction(empty), InputError);
}
