#include "nilmlab/series.hpp"

#include <string>

#include "nilmlab/errors.hpp"

namespace nilm {

PowerSeries resample_mean(const PowerSeries& series, const SamplingSpec& target) {
    const int src = series.sampling.period_seconds;
    const int dst = target.period_seconds;
    if (src < 1 || dst < 1 || dst % src != 0) {
        throw ConfigError("resample: target period " + std::to_string(dst) +
                          "s is not an integer multiple of source period " + std::to_string(src) +
                          "s");
    }
    const std::size_t k = static_cast<std::size_t>(dst / src);
    if (series.values.size() < k) {
        throw InputError("resample: series '" + series.label + "' has " +
                         std::to_string(series.values.size()) + " samples, need at least " +
                         std::to_string(k));
    }
    PowerSeries out;
    out.sampling = target;
    out.label = series.label;
    const std::size_t blocks = series.values.size() / k;
    out.values.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        double sum = 0.0;
        for (std::size_t i = b * k; i < (b + 1) * k; ++i) sum += series.values[i];
        out.values.push_back(sum / static_cast<double>(k));
    }
    return out;
}

StatusSeries resample_status(const StatusSeries& status, const SamplingSpec& target) {
    const int src = status.sampling.period_seconds;
    const int dst = target.period_seconds;
    if (src < 1 || dst < 1 || dst % src != 0) {
        throw ConfigError("resample: target period " + std::to_string(dst) +
                          "s is not an integer multiple of source period " + std::to_string(src) +
                          "s");
    }
    const std::size_t k = static_cast<std::size_t>(dst / src);
    if (status.values.size() < k) {
        throw InputError("resample: status series too short for one block");
    }
    StatusSeries out;
    out.sampling = target;
    const std::size_t blocks = status.values.size() / k;
    out.values.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        std::size_t ones = 0;
        for (std::size_t i = b * k; i < (b + 1) * k; ++i) ones += status.values[i];
        out.values.push_back(2 * ones >= k ? 1 : 0);
    }
    return out;
}

int window_count(std::size_t series_length, int stride) {
    if (series_length < WindowPair::kInputLength) return 0;
    return static_cast<int>((series_length - WindowPair::kInputLength) /
                            static_cast<std::size_t>(stride)) +
           1;
}

namespace {

template <typename TargetAt>
std::vector<WindowPair> cut_windows(const PowerSeries& aggregate, std::size_t target_size,
                                    const SamplingSpec& target_sampling, PairKind kind, int stride,
                                    TargetAt target_at) {
    if (stride < 1) throw ConfigError("windowize: stride must be positive");
    if (aggregate.values.size() != target_size) {
        throw InputError("windowize: aggregate has " + std::to_string(aggregate.values.size()) +
                         " samples but target series has " + std::to_string(target_size));
    }
    if (aggregate.sampling != target_sampling) {
        throw InputError("windowize: aggregate and target series sampling periods differ");
    }
    if (aggregate.values.size() < WindowPair::kInputLength) {
        throw InputError("windowize: series of length " + std::to_string(aggregate.values.size()) +
                         " is shorter than one input window (" +
                         std::to_string(WindowPair::kInputLength) + ")");
    }
    const int n = window_count(aggregate.values.size(), stride);
    std::vector<WindowPair> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const std::size_t start = static_cast<std::size_t>(j) * static_cast<std::size_t>(stride);
        WindowPair pair;
        pair.kind = kind;
        pair.input.assign(aggregate.values.begin() + start,
                          aggregate.values.begin() + start + WindowPair::kInputLength);
        pair.target.resize(WindowPair::kOutputLength);
        for (int i = 0; i < WindowPair::kOutputLength; ++i) {
            pair.target[i] = target_at(start + WindowPair::kTargetOffset + i);
        }
        out.push_back(std::move(pair));
    }
    return out;
}

}  // namespace

std::vector<WindowPair> windowize(const PowerSeries& aggregate, const PowerSeries& appliance,
                                  int stride) {
    return cut_windows(aggregate, appliance.values.size(), appliance.sampling,
                       PairKind::Regression, stride,
                       [&](std::size_t i) { return appliance.values[i]; });
}

std::vector<WindowPair> windowize_status(const PowerSeries& aggregate, const StatusSeries& status,
                                         int stride) {
    return cut_windows(aggregate, status.values.size(), status.sampling, PairKind::Classification,
                       stride,
                       [&](std::size_t i) { return static_cast<double>(status.values[i]); });
}

}  // namespace nilm
