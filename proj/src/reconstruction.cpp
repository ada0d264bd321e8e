#include "nilmlab/reconstruction.hpp"

#include <cmath>
#include <cstdint>

#include "nilmlab/errors.hpp"

namespace nilm {

OnOffLevels compute_levels(std::span<const double> power, std::span<const std::uint8_t> status,
                           LevelsMode mode) {
    if (power.size() != status.size()) {
        throw InputError("compute_levels: power and status lengths differ");
    }
    double sum_on = 0.0, sum_off = 0.0;
    std::size_t n_on = 0;
    for (std::size_t i = 0; i < power.size(); ++i) {
        if (status[i]) {
            sum_on += power[i];
            ++n_on;
        } else {
            sum_off += power[i];
        }
    }
    const std::size_t n_off = power.size() - n_on;
    OnOffLevels levels;
    if (mode == LevelsMode::Literal) {
        const double n = static_cast<double>(power.size());
        levels.p_on = n > 0 ? sum_on / n : 0.0;
        levels.p_off = n > 0 ? sum_off / n : 0.0;
    } else {
        levels.p_on = n_on > 0 ? sum_on / static_cast<double>(n_on) : 0.0;
        levels.p_off = n_off > 0 ? sum_off / static_cast<double>(n_off) : 0.0;
    }
    levels.inverted = levels.p_on < levels.p_off;
    return levels;
}

OnOffLevels compute_levels(const PowerSeries& power, const StatusSeries& status, LevelsMode mode) {
    return compute_levels(std::span<const double>(power.values),
                          std::span<const std::uint8_t>(status.values), mode);
}

std::vector<double> reconstruct_binary(std::span<const std::uint8_t> status,
                                       const OnOffLevels& levels) {
    std::vector<double> out(status.size());
    for (std::size_t i = 0; i < status.size(); ++i) {
        out[i] = status[i] ? levels.p_on : levels.p_off;
    }
    return out;
}

PowerSeries reconstruct_binary(const StatusSeries& status, const OnOffLevels& levels) {
    PowerSeries out;
    out.sampling = status.sampling;
    out.label = "reconstruction";
    out.values = reconstruct_binary(std::span<const std::uint8_t>(status.values), levels);
    return out;
}

double intrinsic_error(std::span<const double> power, std::span<const std::uint8_t> status,
                       LevelsMode mode) {
    const OnOffLevels levels = compute_levels(power, status, mode);
    double sum = 0.0;
    for (std::size_t i = 0; i < power.size(); ++i) {
        sum += std::abs(power[i] - (status[i] ? levels.p_on : levels.p_off));
    }
    return power.empty() ? 0.0 : sum / static_cast<double>(power.size());
}

double intrinsic_error(const PowerSeries& power, const StatusSeries& status, LevelsMode mode) {
    return intrinsic_error(std::span<const double>(power.values),
                           std::span<const std::uint8_t>(status.values), mode);
}

}  // namespace nilm
