#include "nilmlab/synth.hpp"

#include <algorithm>
#include <cmath>

#include "nilmlab/errors.hpp"
#include "nilmlab/rng.hpp"

namespace nilm {

std::string to_string(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::PeriodicRect: return "periodic_rect";
        case ProfileKind::TwoPeakCycle: return "two_peak";
        case ProfileKind::BurstCycle: return "burst";
    }
    return "periodic_rect";
}

ProfileKind profile_kind_from_string(const std::string& name) {
    if (name == "periodic_rect") return ProfileKind::PeriodicRect;
    if (name == "two_peak") return ProfileKind::TwoPeakCycle;
    if (name == "burst") return ProfileKind::BurstCycle;
    throw ConfigError("unknown appliance profile kind '" + name +
                      "' (expected periodic_rect, two_peak or burst)");
}

namespace {

void validate(const ApplianceProfile& p) {
    if (p.on_watts <= 0.0) throw ConfigError("profile '" + p.name + "': on_watts must be > 0");
    if (p.period_seconds <= 0.0 || p.on_duration_seconds <= 0.0) {
        throw ConfigError("profile '" + p.name + "': durations must be > 0");
    }
    if (p.jitter < 0.0 || p.jitter >= 1.0) {
        throw ConfigError("profile '" + p.name + "': jitter must be in [0, 1)");
    }
    if (p.noise_sd_watts < 0.0) {
        throw ConfigError("profile '" + p.name + "': noise_sd must be >= 0");
    }
}

long long round_samples(double seconds, int period) {
    return std::llround(seconds / static_cast<double>(period));
}

// Writes one event template starting at `start`; returns the event length
// in samples.
std::size_t write_event(const ApplianceProfile& p, std::vector<double>& power, std::size_t start,
                        std::size_t on_samples, std::size_t length) {
    const double w = p.on_watts;
    switch (p.kind) {
        case ProfileKind::PeriodicRect: {
            for (std::size_t i = start; i < start + on_samples && i < length; ++i) power[i] = w;
            return on_samples;
        }
        case ProfileKind::TwoPeakCycle: {
            const std::size_t e = std::max<std::size_t>(on_samples, 3);
            std::size_t peak = std::max<std::size_t>(1, static_cast<std::size_t>(0.3 * e));
            if (2 * peak >= e) peak = (e - 1) / 2;
            const double low = 0.12 * w;
            for (std::size_t i = 0; i < e; ++i) {
                const std::size_t t = start + i;
                if (t >= length) break;
                power[t] = (i < peak || i >= e - peak) ? w : low;
            }
            return e;
        }
        case ProfileKind::BurstCycle: {
            const std::size_t e = std::max<std::size_t>(on_samples, 2);
            const std::size_t spike = std::max<std::size_t>(1, static_cast<std::size_t>(0.25 * e));
            for (std::size_t i = 0; i < e; ++i) {
                const std::size_t t = start + i;
                if (t >= length) break;
                if (i < spike) {
                    power[t] = w;
                } else {
                    // oscillating drum segment around a quarter of the peak
                    power[t] = 0.25 * w + 0.15 * w * std::sin(1.5707963267948966 * i);
                }
            }
            return e;
        }
    }
    return on_samples;
}

}  // namespace

SynthAppliance generate_appliance(const ApplianceProfile& profile, std::size_t length,
                                  const SamplingSpec& sampling, std::uint64_t seed) {
    validate(profile);
    Rng rng(seed);
    const int tau = sampling.period_seconds;
    const std::size_t on_samples =
        static_cast<std::size_t>(std::max<long long>(1, round_samples(profile.on_duration_seconds, tau)));

    std::vector<double> power(length, 0.0);
    std::vector<std::uint8_t> truth(length, 0);

    // Event length is fixed by the profile, so compute it once; events that
    // would run past the end are dropped to keep every ON run full length.
    std::size_t event_samples = on_samples;
    if (profile.kind == ProfileKind::TwoPeakCycle) event_samples = std::max<std::size_t>(on_samples, 3);
    if (profile.kind == ProfileKind::BurstCycle) event_samples = std::max<std::size_t>(on_samples, 2);

    std::size_t onset = 0;
    while (onset + event_samples <= length) {
        const std::size_t event_len = write_event(profile, power, onset, on_samples, length);
        for (std::size_t i = onset; i < onset + event_len && i < length; ++i) truth[i] = 1;

        const double spread = profile.jitter == 0.0 ? 0.0 : rng.uniform(-profile.jitter, profile.jitter);
        long long step;
        if (profile.kind == ProfileKind::PeriodicRect) {
            // period is onset-to-onset; keep at least one OFF sample between events
            step = round_samples(profile.period_seconds * (1.0 + spread), tau);
            step = std::max<long long>(step, static_cast<long long>(event_len) + 1);
        } else {
            const long long gap = round_samples(profile.period_seconds * (1.0 + spread), tau);
            step = static_cast<long long>(event_len) + std::max<long long>(1, gap);
        }
        onset += static_cast<std::size_t>(step);
    }

    if (profile.noise_sd_watts > 0.0) {
        for (auto& v : power) {
            v = std::max(0.0, v + rng.gaussian(0.0, profile.noise_sd_watts));
        }
    }

    SynthAppliance out;
    out.power.values = std::move(power);
    out.power.sampling = sampling;
    out.power.label = profile.name;
    out.truth.values = std::move(truth);
    out.truth.sampling = sampling;
    return out;
}

SynthHousehold generate_household(const std::vector<ApplianceProfile>& profiles,
                                  double residual_sd_watts, std::size_t length,
                                  const SamplingSpec& sampling, std::uint64_t seed) {
    if (length == 0) throw ConfigError("household length must be positive");
    if (residual_sd_watts < 0.0) throw ConfigError("residual_sd must be >= 0");

    SynthHousehold household;
    household.aggregate.values.assign(length, 0.0);
    household.aggregate.sampling = sampling;
    household.aggregate.label = "aggregate";

    for (std::size_t a = 0; a < profiles.size(); ++a) {
        const std::uint64_t child = Rng::derive(seed, "appliance:" + profiles[a].name, a);
        household.appliances.push_back(generate_appliance(profiles[a], length, sampling, child));
        const auto& power = household.appliances.back().power.values;
        for (std::size_t i = 0; i < length; ++i) household.aggregate.values[i] += power[i];
    }

    household.residual.values.assign(length, 0.0);
    household.residual.sampling = sampling;
    household.residual.label = "residual";
    if (residual_sd_watts > 0.0) {
        Rng rng(Rng::derive(seed, "residual"));
        for (std::size_t i = 0; i < length; ++i) {
            const double sum = household.aggregate.values[i];
            household.aggregate.values[i] = sum + std::max(0.0, rng.gaussian(0.0, residual_sd_watts));
            // stored as the representable difference so that
            // aggregate - sum(appliances) == residual holds exactly
            household.residual.values[i] = household.aggregate.values[i] - sum;
        }
    }
    return household;
}

}  // namespace nilm
