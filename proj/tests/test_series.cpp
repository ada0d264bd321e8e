#include <doctest.h>

#include <numeric>

#include "nilmlab/errors.hpp"
#include "nilmlab/rng.hpp"
#include "nilmlab/series.hpp"

using namespace nilm;

namespace {

PowerSeries series_of(std::vector<double> values, int period, std::string label = "test") {
    PowerSeries s;
    s.values = std::move(values);
    s.sampling.period_seconds = period;
    s.label = std::move(label);
    return s;
}

PowerSeries ramp(std::size_t n, int period = 60) {
    PowerSeries s;
    s.sampling.period_seconds = period;
    s.values.resize(n);
    std::iota(s.values.begin(), s.values.end(), 0.0);
    return s;
}

}  // namespace

TEST_CASE("resample_mean block means") {
    const PowerSeries s = series_of({1, 2, 3, 4}, 6);
    const PowerSeries out = resample_mean(s, SamplingSpec{12});
    REQUIRE(out.values.size() == 2);
    CHECK(out.values[0] == 1.5);
    CHECK(out.values[1] == 3.5);
    CHECK(out.sampling.period_seconds == 12);
}

TEST_CASE("resample_mean constant blocks") {
    const PowerSeries s = series_of({6, 6, 6, 6, 6, 6, 0, 0, 0, 0, 0, 0}, 6);
    const PowerSeries out = resample_mean(s, SamplingSpec{36});
    REQUIRE(out.values.size() == 2);
    CHECK(out.values[0] == 6.0);
    CHECK(out.values[1] == 0.0);
}

TEST_CASE("resample_mean identity when periods match") {
    const PowerSeries s = series_of({5, 7, 9}, 60);
    const PowerSeries out = resample_mean(s, SamplingSpec{60});
    CHECK(out.values == s.values);
}

TEST_CASE("resample_mean drops the trailing partial block") {
    const PowerSeries s = series_of({1, 2, 3, 4, 5}, 6);
    const PowerSeries out = resample_mean(s, SamplingSpec{12});
    REQUIRE(out.values.size() == 2);
    CHECK(out.values[1] == 3.5);
}

TEST_CASE("resample_mean rejects non-divisible periods") {
    const PowerSeries s = series_of({1, 2, 3}, 7);
    CHECK_THROWS_AS(resample_mean(s, SamplingSpec{12}), ConfigError);
}

TEST_CASE("resample_mean rejects series shorter than one block") {
    const PowerSeries s = series_of({1, 2, 3}, 6);
    CHECK_THROWS_AS(resample_mean(s, SamplingSpec{60}), InputError);
}

TEST_CASE("resample_mean preserves energy over full blocks") {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.below(400));
        std::vector<double> values(n);
        for (auto& v : values) v = rng.uniform(0.0, 3000.0);
        const int k = 1 + static_cast<int>(rng.below(9));
        const PowerSeries s = series_of(values, 6);
        if (n < static_cast<std::size_t>(k)) continue;
        const PowerSeries out = resample_mean(s, SamplingSpec{6 * k});
        for (std::size_t b = 0; b < out.values.size(); ++b) {
            double block = 0.0;
            for (std::size_t i = b * k; i < (b + 1) * k; ++i) block += values[i];
            CHECK(out.values[b] * k == doctest::Approx(block).epsilon(1e-12));
        }
    }
}

TEST_CASE("resample_status takes the block majority with ties ON") {
    StatusSeries s;
    s.sampling.period_seconds = 6;
    s.values = {1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1};
    const StatusSeries out = resample_status(s, SamplingSpec{30});  // blocks of 5
    REQUIRE(out.values.size() == 4);
    CHECK(out.values[0] == 0);  // 1 of 5
    CHECK(out.values[1] == 1);  // 3 of 5
    CHECK(out.values[2] == 0);  // 0 of 5
    CHECK(out.values[3] == 1);  // 3 of 5
}

TEST_CASE("windowize produces overlapping paper-layout windows") {
    const PowerSeries agg = ramp(990);
    const std::vector<WindowPair> pairs = windowize(agg, agg, 480);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].input[0] == 0.0);
    CHECK(pairs[1].input[0] == 480.0);  // second window starts at 480, overlapping by 30
    CHECK(pairs[0].input.size() == 510);
    CHECK(pairs[0].target.size() == 480);
    CHECK(pairs[0].target[0] == 15.0);  // centered target offset
    CHECK(pairs[1].target[0] == 495.0);
}

TEST_CASE("windowize single window") {
    const PowerSeries agg = ramp(510);
    const std::vector<WindowPair> pairs = windowize(agg, agg, 480);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].target.front() == 15.0);
    CHECK(pairs[0].target.back() == 494.0);
}

TEST_CASE("windowize rejects short and mismatched inputs") {
    CHECK_THROWS_AS(windowize(ramp(509), ramp(509), 480), InputError);
    CHECK_THROWS_AS(windowize(ramp(600), ramp(601), 480), InputError);
    PowerSeries other = ramp(600);
    other.sampling.period_seconds = 6;
    CHECK_THROWS_AS(windowize(ramp(600), other, 480), InputError);
}

TEST_CASE("window targets tile contiguously") {
    const PowerSeries agg = ramp(510 + 480 * 4 + 123);
    const std::vector<WindowPair> pairs = windowize(agg, agg, 480);
    CHECK(static_cast<int>(pairs.size()) == window_count(agg.size(), 480));
    double expect = 15.0;
    for (const WindowPair& p : pairs) {
        for (const double v : p.target) {
            CHECK(v == expect);
            expect += 1.0;
        }
    }
}

TEST_CASE("window count formula") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 510 + static_cast<std::size_t>(rng.below(3000));
        const int expected = static_cast<int>((n - 510) / 480) + 1;
        CHECK(window_count(n, 480) == expected);
    }
    CHECK(window_count(509, 480) == 0);
}

TEST_CASE("windowize_status yields binary classification targets") {
    const PowerSeries agg = ramp(510);
    StatusSeries status;
    status.sampling.period_seconds = 60;
    status.values.assign(510, 0);
    for (std::size_t i = 100; i < 200; ++i) status.values[i] = 1;
    const std::vector<WindowPair> pairs = windowize_status(agg, status, 480);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].kind == PairKind::Classification);
    for (const double v : pairs[0].target) CHECK((v == 0.0 || v == 1.0));
    CHECK(pairs[0].target[100 - 15] == 1.0);
    CHECK(pairs[0].target[99 - 15] == 0.0);
}
