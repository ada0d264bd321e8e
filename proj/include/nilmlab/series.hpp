#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nilm {

// Seconds per sample of a uniformly sampled series.
struct SamplingSpec {
    int period_seconds = 60;

    friend bool operator==(const SamplingSpec&, const SamplingSpec&) = default;
};

// Nonnegative power readings in watts on a uniform grid. Timestamps are
// implicit (index * period); gaps must be pre-filled or pre-split upstream.
struct PowerSeries {
    std::vector<double> values;
    SamplingSpec sampling;
    std::string label;

    std::size_t size() const { return values.size(); }
};

// Binary ON/OFF sequence aligned to a PowerSeries.
struct StatusSeries {
    std::vector<std::uint8_t> values;  // each 0 or 1
    SamplingSpec sampling;

    std::size_t size() const { return values.size(); }
};

enum class PairKind { Regression, Classification };

// One supervised example: an input window over the aggregate load and the
// centered target window over one appliance (power or status).
struct WindowPair {
    std::vector<double> input;   // length input_length
    std::vector<double> target;  // length output_length
    PairKind kind = PairKind::Regression;
    double window_mean_watts = 0.0;  // input mean subtracted by normalization

    static constexpr int kInputLength = 510;
    static constexpr int kOutputLength = 480;
    // The target covers the centered output span; (in - out)/2 trimmed per side.
    static constexpr int kTargetOffset = (kInputLength - kOutputLength) / 2;
};

// Block means at an integer multiple of the source period; a trailing
// partial block is dropped.
PowerSeries resample_mean(const PowerSeries& series, const SamplingSpec& target);

// Majority vote per block (ties -> ON); used when thresholding ran at a
// finer resolution than the training grid.
StatusSeries resample_status(const StatusSeries& status, const SamplingSpec& target);

// Cuts (aggregate, target) into window pairs. Window j starts at j*stride;
// the target is the centered output span of the input window. Trailing
// samples that do not fill a window are dropped. With the default stride
// (input length - 30) consecutive targets tile time contiguously.
std::vector<WindowPair> windowize(const PowerSeries& aggregate, const PowerSeries& appliance,
                                  int stride);

// Same cutting rule with a status series as the (classification) target.
std::vector<WindowPair> windowize_status(const PowerSeries& aggregate, const StatusSeries& status,
                                         int stride);

int window_count(std::size_t series_length, int stride);

}  // namespace nilm
