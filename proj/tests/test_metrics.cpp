#include <doctest.h>

#include <cmath>

#include "nilmlab/errors.hpp"
#include "nilmlab/metrics.hpp"
#include "nilmlab/rng.hpp"

using namespace nilm;

namespace {

std::vector<std::uint8_t> bits(std::initializer_list<int> values) {
    std::vector<std::uint8_t> out;
    for (const int v : values) out.push_back(v ? 1 : 0);
    return out;
}

}  // namespace

TEST_CASE("mae scales to watts") {
    CHECK(mae(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}, 2000.0) == 0.0);
    CHECK(mae(std::vector<double>{0.5}, std::vector<double>{0.25}, 2000.0) == 500.0);
    CHECK(mae(std::vector<double>{2, 4}, std::vector<double>{1, 2}, 1.0) == 1.5);
}

TEST_CASE("mae is symmetric and homogeneous in the scale") {
    Rng rng(3);
    std::vector<double> a(32), b(32);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = rng.uniform(-1, 1);
        b[i] = rng.uniform(-1, 1);
    }
    CHECK(mae(a, b, 1.0) == mae(b, a, 1.0));
    CHECK(mae(a, b, 2000.0) == doctest::Approx(2000.0 * mae(a, b, 1.0)).epsilon(1e-12));
}

TEST_CASE("predicted_status boundary maps to ON") {
    const auto s = predicted_status(std::vector<double>{0.49, 0.5, 0.51});
    CHECK(s == bits({0, 1, 1}));
    CHECK(predicted_status(std::vector<double>{0, 0, 0}) == bits({0, 0, 0}));
    CHECK(predicted_status(std::vector<double>{1.0}) == bits({1}));
}

TEST_CASE("confusion product formulas") {
    const ConfusionCounts c = confusion(bits({1, 1, 0, 0}), bits({1, 0, 1, 0}));
    CHECK(c.tp == 1.0);
    CHECK(c.fp == 1.0);
    CHECK(c.fn == 1.0);
    CHECK(c.tn == 1.0);

    const ConfusionCounts all_on = confusion(bits({1, 1, 1, 1}), bits({1, 1, 1, 1}));
    CHECK(all_on.tp == 4.0);
    CHECK(all_on.fp + all_on.fn + all_on.tn == 0.0);

    const ConfusionCounts miss = confusion(bits({0, 0, 0}), bits({1, 1, 1}));
    CHECK(miss.fn == 3.0);
}

TEST_CASE("confusion equals explicit enumeration, exhaustive to length 10") {
    for (int n = 1; n <= 10; ++n) {
        for (int p = 0; p < (1 << n); ++p) {
            for (int y = 0; y < (1 << n); ++y) {
                std::vector<std::uint8_t> pred(n), truth(n);
                int tp = 0, fp = 0, fn = 0, tn = 0;
                for (int i = 0; i < n; ++i) {
                    pred[i] = (p >> i) & 1;
                    truth[i] = (y >> i) & 1;
                    if (pred[i] && truth[i]) ++tp;
                    if (pred[i] && !truth[i]) ++fp;
                    if (!pred[i] && truth[i]) ++fn;
                    if (!pred[i] && !truth[i]) ++tn;
                }
                const ConfusionCounts c = confusion(pred, truth);
                REQUIRE(c.tp == tp);
                REQUIRE(c.fp == fp);
                REQUIRE(c.fn == fn);
                REQUIRE(c.tn == tn);
                REQUIRE(c.total() == n);
            }
        }
    }
}

TEST_CASE("f1 per-series averaging") {
    ConfusionCounts a{2, 1, 1, 0};
    CHECK(f1_score(a) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

    ConfusionCounts perfect{4, 0, 0, 4};
    CHECK(f1_score(perfect) == 1.0);

    ConfusionCounts none{0, 0, 0, 5};
    CHECK(f1_score(none) == 1.0);  // all-negative agreement

    std::vector<ConfusionCounts> series{{1, 0, 0, 0}, {1, 1, 1, 0}};
    CHECK(f1_per_series(series) == doctest::Approx(0.75).epsilon(1e-12));

    CHECK_THROWS_AS(f1_per_series(std::vector<ConfusionCounts>{}), InputError);
}

TEST_CASE("f1 equals one only when every series is exact") {
    std::vector<ConfusionCounts> clean{{3, 0, 0, 2}, {0, 0, 0, 4}};
    CHECK(f1_per_series(clean) == 1.0);
    std::vector<ConfusionCounts> dirty{{3, 0, 0, 2}, {3, 1, 0, 2}};
    CHECK(f1_per_series(dirty) < 1.0);
}

TEST_CASE("roc_auc rank statistic") {
    CHECK(roc_auc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, bits({0, 0, 1, 1})) == 0.75);
    CHECK(roc_auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, bits({0, 0, 1, 1})) == 1.0);
    CHECK(roc_auc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, bits({0, 1, 0, 1})) == 0.5);
    CHECK_THROWS_AS(roc_auc(std::vector<double>{0.1, 0.9}, bits({1, 1})), InputError);
}

TEST_CASE("roc_auc is invariant under strictly increasing transforms") {
    Rng rng(17);
    std::vector<double> scores(64);
    std::vector<std::uint8_t> truth(64);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        scores[i] = rng.uniform(0.0, 1.0);
        truth[i] = rng.below(2) ? 1 : 0;
    }
    truth[0] = 0;
    truth[1] = 1;
    const double base = roc_auc(scores, truth);
    std::vector<double> warped(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) warped[i] = std::exp(3.0 * scores[i]) - 2.0;
    CHECK(roc_auc(warped, truth) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("precision and recall conventions") {
    ConfusionCounts c{2, 1, 1, 4};
    CHECK(precision(c) == doctest::Approx(2.0 / 3.0));
    CHECK(recall(c) == doctest::Approx(2.0 / 3.0));
    ConfusionCounts nothing{0, 0, 0, 4};
    CHECK(precision(nothing) == 1.0);
    CHECK(recall(nothing) == 1.0);
    ConfusionCounts silent{0, 0, 2, 4};
    CHECK(precision(silent) == 0.0);
    CHECK(recall(silent) == 0.0);
}
