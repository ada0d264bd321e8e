#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nilmlab/reconstruction.hpp"
#include "oracles.hpp"
#include "nilmlab/rng.hpp"

using namespace nilm;

namespace {

std::vector<std::uint8_t> bits(std::initializer_list<int> values) {
    std::vector<std::uint8_t> out;
    for (const int v : values) out.push_back(v ? 1 : 0);
    return out;
}

}  // namespace

TEST_CASE("compute_levels conditional means") {
    const OnOffLevels a = compute_levels(std::vector<double>{0, 0, 100, 100}, bits({0, 0, 1, 1}));
    CHECK(a.p_on == 100.0);
    CHECK(a.p_off == 0.0);

    const OnOffLevels b = compute_levels(std::vector<double>{10, 20, 300}, bits({0, 0, 1}));
    CHECK(b.p_on == 300.0);
    CHECK(b.p_off == 15.0);

    const OnOffLevels c = compute_levels(std::vector<double>{5, 6}, bits({0, 0}));
    CHECK(c.p_on == 0.0);  // absent state defaults to zero
    CHECK(c.p_off == 5.5);
}

TEST_CASE("compute_levels literal mode divides by the full length") {
    const OnOffLevels l =
        compute_levels(std::vector<double>{10, 20, 300}, bits({0, 0, 1}), LevelsMode::Literal);
    CHECK(l.p_on == 100.0);
    CHECK(l.p_off == 10.0);
}

TEST_CASE("reconstruct_binary substitutes levels") {
    OnOffLevels levels;
    levels.p_on = 100.0;
    levels.p_off = 5.0;
    CHECK(reconstruct_binary(bits({1, 0, 1}), levels) == std::vector<double>{100, 5, 100});
    CHECK(reconstruct_binary(bits({1, 1}), levels) == std::vector<double>{100, 100});
    OnOffLevels zero;
    CHECK(reconstruct_binary(bits({0, 0}), zero) == std::vector<double>{0, 0});
}

TEST_CASE("intrinsic_error vanishes on binary signals") {
    CHECK(intrinsic_error(std::vector<double>{0, 100, 0, 100}, bits({0, 1, 0, 1})) == 0.0);
    CHECK(intrinsic_error(std::vector<double>{0, 10, 0, 10}, bits({0, 1, 0, 1})) == 0.0);
}

TEST_CASE("intrinsic_error hand case") {
    const double err = intrinsic_error(std::vector<double>{0, 8, 12}, bits({0, 1, 1}));
    CHECK(err == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("intrinsic_error is permutation invariant") {
    Rng rng(9);
    std::vector<double> power(50);
    std::vector<std::uint8_t> status(50);
    for (std::size_t i = 0; i < power.size(); ++i) {
        power[i] = rng.uniform(0.0, 100.0);
        status[i] = rng.below(2) ? 1 : 0;
    }
    status[0] = 0;
    status[1] = 1;
    const double base = intrinsic_error(power, status);
    std::vector<std::size_t> order(power.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<double> p2(power.size());
    std::vector<std::uint8_t> s2(power.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        p2[i] = power[order[i]];
        s2[i] = status[order[i]];
    }
    CHECK(intrinsic_error(p2, s2) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("intrinsic_error is zero iff power is constant per class") {
    CHECK(intrinsic_error(std::vector<double>{7, 7, 42, 42, 7}, bits({0, 0, 1, 1, 0})) == 0.0);
    CHECK(intrinsic_error(std::vector<double>{7, 8, 42, 42, 7}, bits({0, 0, 1, 1, 0})) > 0.0);
}

TEST_CASE("conditional levels minimize reconstruction MSE") {
    Rng rng(123);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 20 + static_cast<std::size_t>(rng.below(80));
        std::vector<double> power(n);
        std::vector<std::uint8_t> status(n);
        for (std::size_t i = 0; i < n; ++i) {
            status[i] = rng.below(2) ? 1 : 0;
            power[i] = status[i] ? rng.uniform(0.4, 1.0) : rng.uniform(0.0, 0.3);
        }
        status[0] = 0;
        status[1] = 1;
        const OnOffLevels levels = compute_levels(power, status);
        const double mse_cond = nilm_test::mse_two_level(power, status, levels.p_on, levels.p_off);
        const double lo = *std::min_element(power.begin(), power.end());
        const double hi = *std::max_element(power.begin(), power.end());
        const double step = 0.01 * (hi - lo);
        double best = std::numeric_limits<double>::infinity();
        for (double on = lo; on <= hi + 1e-12; on += step) {
            for (double off = lo; off <= hi + 1e-12; off += step) {
                best = std::min(best, nilm_test::mse_two_level(power, status, on, off));
            }
        }
        CHECK(mse_cond <= best + 1e-6);
    }
}

TEST_CASE("inverted levels are flagged, not rejected") {
    const OnOffLevels l = compute_levels(std::vector<double>{100, 100, 5}, bits({0, 0, 1}));
    CHECK(l.inverted);
    CHECK(l.p_on == 5.0);
}
