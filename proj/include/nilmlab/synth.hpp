#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nilmlab/series.hpp"

namespace nilm {

enum class ProfileKind {
    PeriodicRect,  // fridge-like rectangular pulses on a regular period
    TwoPeakCycle,  // dishwasher-like: two high plateaus around a low one
    BurstCycle,    // washer-like: a high spike then an oscillating segment
};

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

struct ApplianceProfile {
    std::string name;
    ProfileKind kind = ProfileKind::PeriodicRect;
    double on_watts = 100.0;
    // PeriodicRect: onset-to-onset period. Other kinds: gap between the end
    // of one event and the start of the next.
    double period_seconds = 1800.0;
    double on_duration_seconds = 600.0;
    double jitter = 0.0;  // fractional spread of the period/gap, in [0, 1)
    double noise_sd_watts = 0.0;
};

struct SynthAppliance {
    PowerSeries power;
    StatusSeries truth;  // template activity, independent of noise
};

struct SynthHousehold {
    PowerSeries aggregate;
    std::vector<SynthAppliance> appliances;
    PowerSeries residual;
};

// Event template plus truncated Gaussian noise. The ground-truth status
// marks template activity exactly, which gives synthetic data the "true"
// ON/OFF labels real meter exports lack.
SynthAppliance generate_appliance(const ApplianceProfile& profile, std::size_t length,
                                  const SamplingSpec& sampling, std::uint64_t seed);

// aggregate = sum of appliance loads + nonnegative residual.
SynthHousehold generate_household(const std::vector<ApplianceProfile>& profiles,
                                  double residual_sd_watts, std::size_t length,
                                  const SamplingSpec& sampling, std::uint64_t seed);

}  // namespace nilm
