#pragma once

#include <optional>
#include <span>
#include <string>

#include "nilmlab/series.hpp"

namespace nilm {

// Result of splitting appliance power values into OFF/ON clusters.
struct ClusterSummary {
    double m0 = 0.0;  // OFF centroid, watts
    double m1 = 0.0;  // ON centroid, watts (m0 <= m1)
    double sigma0 = 0.0;  // population std dev per cluster
    double sigma1 = 0.0;
    std::size_t n0 = 0;
    std::size_t n1 = 0;
};

enum class ThresholdMethod { MP, VS, AT };

std::string to_string(ThresholdMethod method);
ThresholdMethod threshold_method_from_string(const std::string& name);

struct ThresholdSpec {
    ThresholdMethod method = ThresholdMethod::MP;
    double lambda_watts = 0.0;
    double mu_off_seconds = 0.0;  // minimum OFF duration, AT only
    double mu_on_seconds = 0.0;   // minimum ON duration, AT only
    std::optional<ClusterSummary> clusters;  // present for MP/VS
};

// Exact optimal two-cluster 1D k-means: sorts the values and scans every
// split point for the minimum total within-cluster sum of squares. No
// Lloyd iteration, so the result is deterministic and optimal.
// Throws InputError when fewer than two distinct values exist.
ClusterSummary kmeans_1d_two(std::span<const double> values);

// lambda at the midpoint of the two centroids.
ThresholdSpec threshold_mp(const ClusterSummary& summary);

// lambda interpolated between the centroids by d = sigma0/(sigma0+sigma1).
// Falls back to MP when both deviations are zero.
ThresholdSpec threshold_vs(const ClusterSummary& summary);

// status[i] = 1 iff power[i] >= lambda (ties are ON).
StatusSeries apply_power_threshold(const PowerSeries& power, double lambda_watts);

// Two passes: OFF runs shorter than ceil(mu_off/period) samples whose
// previous state is ON are relabeled ON (runs touching the start keep
// their label), then ON runs shorter than ceil(mu_on/period) samples are
// relabeled OFF.
StatusSeries duration_filter(const StatusSeries& status, double mu_off_seconds,
                             double mu_on_seconds);

// Power threshold followed by the duration filter.
StatusSeries threshold_at(const PowerSeries& power, const ThresholdSpec& spec);

// Derives a spec from training values: MP/VS cluster the data, AT returns
// the supplied per-appliance parameters.
ThresholdSpec derive_threshold(std::span<const double> train_values, ThresholdMethod method,
                               const std::optional<ThresholdSpec>& at_spec = std::nullopt);

// Applies any spec to a power series (AT adds the duration filter).
StatusSeries apply_threshold(const PowerSeries& power, const ThresholdSpec& spec);

// Built-in AT parameters for the appliances they were tuned on; matches on
// a lowercased substring of the appliance name ("fridge", "dish", "wash").
std::optional<ThresholdSpec> at_defaults_for(const std::string& appliance);

}  // namespace nilm
