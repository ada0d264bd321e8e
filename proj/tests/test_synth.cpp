#include <doctest.h>

#include <set>

#include "nilmlab/reconstruction.hpp"
#include "nilmlab/synth.hpp"
#include "nilmlab/threshold.hpp"

using namespace nilm;

namespace {

ApplianceProfile fridge_profile() {
    ApplianceProfile p;
    p.name = "fridge";
    p.kind = ProfileKind::PeriodicRect;
    p.on_watts = 100.0;
    p.period_seconds = 600.0;
    p.on_duration_seconds = 240.0;
    return p;
}

constexpr SamplingSpec kMinute{60};

}  // namespace

TEST_CASE("noiseless rectangles take exactly two values") {
    const SynthAppliance app = generate_appliance(fridge_profile(), 2000, kMinute, 7);
    std::set<double> values(app.power.values.begin(), app.power.values.end());
    CHECK(values == std::set<double>{0.0, 100.0});
    for (std::size_t i = 0; i < app.power.size(); ++i) {
        CHECK((app.power.values[i] > 0.0) == (app.truth.values[i] == 1));
    }
}

TEST_CASE("generation is deterministic in the seed") {
    ApplianceProfile p = fridge_profile();
    p.jitter = 0.3;
    p.noise_sd_watts = 5.0;
    const SynthAppliance a = generate_appliance(p, 1500, kMinute, 11);
    const SynthAppliance b = generate_appliance(p, 1500, kMinute, 11);
    const SynthAppliance c = generate_appliance(p, 1500, kMinute, 12);
    CHECK(a.power.values == b.power.values);
    CHECK(a.truth.values == b.truth.values);
    CHECK(a.power.values != c.power.values);
}

TEST_CASE("jitter-free onsets land every period") {
    const SynthAppliance app = generate_appliance(fridge_profile(), 100, kMinute, 3);
    for (std::size_t i = 0; i < app.truth.size(); ++i) {
        const bool onset = app.truth.values[i] == 1 && (i == 0 || app.truth.values[i - 1] == 0);
        CHECK(onset == (i % 10 == 0));  // 600 s / 60 s
    }
}

TEST_CASE("ground-truth runs are never shorter than the on duration") {
    ApplianceProfile p = fridge_profile();
    p.jitter = 0.4;
    const SynthAppliance app = generate_appliance(p, 5000, kMinute, 23);
    const std::size_t min_run = 4;  // 240 s / 60 s
    std::size_t i = 0;
    while (i < app.truth.size()) {
        if (app.truth.values[i] == 1) {
            std::size_t j = i;
            while (j < app.truth.size() && app.truth.values[j] == 1) ++j;
            CHECK(j - i >= min_run);
            i = j;
        } else {
            ++i;
        }
    }
}

TEST_CASE("two-peak events hold a low plateau between peaks") {
    ApplianceProfile p;
    p.name = "dishwasher";
    p.kind = ProfileKind::TwoPeakCycle;
    p.on_watts = 2200.0;
    p.period_seconds = 7200.0;
    p.on_duration_seconds = 1800.0;  // 30 samples
    const SynthAppliance app = generate_appliance(p, 400, kMinute, 5);
    bool saw_peak = false, saw_plateau = false;
    for (std::size_t i = 0; i < app.power.size(); ++i) {
        if (app.truth.values[i]) {
            saw_peak |= app.power.values[i] == 2200.0;
            saw_plateau |= app.power.values[i] == doctest::Approx(0.12 * 2200.0);
            CHECK(app.power.values[i] > 0.0);
        } else {
            CHECK(app.power.values[i] == 0.0);
        }
    }
    CHECK(saw_peak);
    CHECK(saw_plateau);
}

TEST_CASE("burst events spike then oscillate") {
    ApplianceProfile p;
    p.name = "washer";
    p.kind = ProfileKind::BurstCycle;
    p.on_watts = 1900.0;
    p.period_seconds = 7200.0;
    p.on_duration_seconds = 3600.0;
    const SynthAppliance app = generate_appliance(p, 400, kMinute, 5);
    bool saw_spike = false;
    double lo = 1e9, hi = 0.0;
    for (std::size_t i = 0; i < app.power.size(); ++i) {
        if (!app.truth.values[i]) continue;
        saw_spike |= app.power.values[i] == 1900.0;
        if (app.power.values[i] < 1900.0) {
            lo = std::min(lo, app.power.values[i]);
            hi = std::max(hi, app.power.values[i]);
        }
    }
    CHECK(saw_spike);
    CHECK(hi > lo);  // oscillating drum segment
    CHECK(lo > 0.0);
}

TEST_CASE("household aggregate is the exact sum plus a nonnegative residual") {
    std::vector<ApplianceProfile> profiles{fridge_profile()};
    ApplianceProfile second = fridge_profile();
    second.name = "heater";
    second.on_watts = 900.0;
    second.period_seconds = 3600.0;
    profiles.push_back(second);

    const SynthHousehold h = generate_household(profiles, 25.0, 3000, kMinute, 99);
    REQUIRE(h.appliances.size() == 2);
    for (std::size_t i = 0; i < h.aggregate.size(); ++i) {
        const double sum =
            h.appliances[0].power.values[i] + h.appliances[1].power.values[i];
        const double residual = h.aggregate.values[i] - sum;
        CHECK(residual == h.residual.values[i]);
        CHECK(residual >= 0.0);
    }
}

TEST_CASE("single appliance with no residual reproduces the appliance") {
    const SynthHousehold h = generate_household({fridge_profile()}, 0.0, 1200, kMinute, 4);
    CHECK(h.aggregate.values == h.appliances[0].power.values);
}

TEST_CASE("residual-only household is nonnegative noise") {
    const SynthHousehold h = generate_household({}, 40.0, 600, kMinute, 8);
    bool any_positive = false;
    for (const double v : h.aggregate.values) {
        CHECK(v >= 0.0);
        any_positive |= v > 0.0;
    }
    CHECK(any_positive);
}

TEST_CASE("MP threshold on a clean rectangle is half the plateau") {
    const SynthAppliance app = generate_appliance(fridge_profile(), 4000, kMinute, 21);
    const ThresholdSpec spec = derive_threshold(app.power.values, ThresholdMethod::MP);
    CHECK(spec.lambda_watts == 50.0);
    // and the thresholded status recovers the ground truth exactly
    const StatusSeries status = apply_threshold(app.power, spec);
    CHECK(status.values == app.truth.values);
}
