#pragma once

#include <span>

#include "nilmlab/series.hpp"

namespace nilm {

// Two-level power representation of a thresholded appliance.
struct OnOffLevels {
    double p_on = 0.0;
    double p_off = 0.0;
    bool inverted = false;  // set when p_on < p_off came out of the data
};

enum class LevelsMode {
    // Mean power over the samples of each state (default). These are the
    // MSE-optimal two-level reconstruction values.
    Conditional,
    // Sums divided by the total sample count instead of the per-state
    // count; kept for comparison runs.
    Literal,
};

// Average power over ON and OFF samples; a state that never occurs gets
// level 0.
OnOffLevels compute_levels(std::span<const double> power, std::span<const std::uint8_t> status,
                           LevelsMode mode = LevelsMode::Conditional);

OnOffLevels compute_levels(const PowerSeries& power, const StatusSeries& status,
                           LevelsMode mode = LevelsMode::Conditional);

// out[i] = p_on if status[i] else p_off.
std::vector<double> reconstruct_binary(std::span<const std::uint8_t> status,
                                       const OnOffLevels& levels);

PowerSeries reconstruct_binary(const StatusSeries& status, const OnOffLevels& levels);

// Mean absolute difference between the power series and its own two-level
// reconstruction; a prediction-free measure of how faithfully a threshold
// represents the signal.
double intrinsic_error(std::span<const double> power, std::span<const std::uint8_t> status,
                       LevelsMode mode = LevelsMode::Conditional);

double intrinsic_error(const PowerSeries& power, const StatusSeries& status,
                       LevelsMode mode = LevelsMode::Conditional);

}  // namespace nilm
