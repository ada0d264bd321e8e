#include "nilmlab/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nilmlab/errors.hpp"

namespace nilm {

std::string to_string(ThresholdMethod method) {
    switch (method) {
        case ThresholdMethod::MP: return "mp";
        case ThresholdMethod::VS: return "vs";
        case ThresholdMethod::AT: return "at";
    }
    return "mp";
}

ThresholdMethod threshold_method_from_string(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "mp") return ThresholdMethod::MP;
    if (lower == "vs") return ThresholdMethod::VS;
    if (lower == "at") return ThresholdMethod::AT;
    throw ConfigError("unknown threshold method '" + name + "' (expected mp, vs or at)");
}

ClusterSummary kmeans_1d_two(std::span<const double> values) {
    if (values.size() < 2) {
        throw InputError("kmeans_1d_two: need at least 2 values");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) {
        throw InputError("kmeans_1d_two: all values identical, threshold undefined");
    }
    const std::size_t n = sorted.size();

    // Prefix sums let every split be scored in O(1). The optimal 2-means
    // partition in 1D is always a split of the sorted order.
    std::vector<double> pre_sum(n + 1, 0.0), pre_sq(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        pre_sum[i + 1] = pre_sum[i] + sorted[i];
        pre_sq[i + 1] = pre_sq[i] + sorted[i] * sorted[i];
    }
    auto sse = [&](std::size_t lo, std::size_t hi) {  // [lo, hi)
        const double cnt = static_cast<double>(hi - lo);
        const double sum = pre_sum[hi] - pre_sum[lo];
        const double sq = pre_sq[hi] - pre_sq[lo];
        return sq - sum * sum / cnt;
    };

    std::size_t best_split = 1;
    double best_sse = std::numeric_limits<double>::infinity();
    for (std::size_t s = 1; s < n; ++s) {
        const double total = sse(0, s) + sse(s, n);
        if (total < best_sse) {
            best_sse = total;
            best_split = s;
        }
    }

    ClusterSummary out;
    out.n0 = best_split;
    out.n1 = n - best_split;
    out.m0 = (pre_sum[best_split]) / static_cast<double>(out.n0);
    out.m1 = (pre_sum[n] - pre_sum[best_split]) / static_cast<double>(out.n1);
    out.sigma0 = std::sqrt(std::max(0.0, sse(0, best_split) / static_cast<double>(out.n0)));
    out.sigma1 = std::sqrt(std::max(0.0, sse(best_split, n) / static_cast<double>(out.n1)));
    return out;
}

ThresholdSpec threshold_mp(const ClusterSummary& summary) {
    ThresholdSpec spec;
    spec.method = ThresholdMethod::MP;
    spec.lambda_watts = 0.5 * summary.m0 + 0.5 * summary.m1;
    spec.clusters = summary;
    return spec;
}

ThresholdSpec threshold_vs(const ClusterSummary& summary) {
    const double sigma_sum = summary.sigma0 + summary.sigma1;
    if (sigma_sum <= 0.0) {
        ThresholdSpec spec = threshold_mp(summary);
        spec.method = ThresholdMethod::VS;
        return spec;
    }
    const double d = summary.sigma0 / sigma_sum;
    ThresholdSpec spec;
    spec.method = ThresholdMethod::VS;
    spec.lambda_watts = (1.0 - d) * summary.m0 + d * summary.m1;
    spec.clusters = summary;
    return spec;
}

StatusSeries apply_power_threshold(const PowerSeries& power, double lambda_watts) {
    StatusSeries status;
    status.sampling = power.sampling;
    status.values.resize(power.values.size());
    for (std::size_t i = 0; i < power.values.size(); ++i) {
        status.values[i] = power.values[i] >= lambda_watts ? 1 : 0;
    }
    return status;
}

namespace {

std::size_t seconds_to_samples(double seconds, int period_seconds) {
    if (seconds <= 0.0) return 0;
    return static_cast<std::size_t>(std::ceil(seconds / static_cast<double>(period_seconds)));
}

}  // namespace

StatusSeries duration_filter(const StatusSeries& status, double mu_off_seconds,
                             double mu_on_seconds) {
    const std::size_t min_off = seconds_to_samples(mu_off_seconds, status.sampling.period_seconds);
    const std::size_t min_on = seconds_to_samples(mu_on_seconds, status.sampling.period_seconds);
    StatusSeries out = status;
    const std::size_t n = out.values.size();
    if (n == 0) return out;

    // Pass 1: short OFF runs with a previous ON state become ON. A maximal
    // OFF run that does not touch the start is necessarily preceded by ON.
    if (min_off > 0) {
        std::size_t i = 0;
        while (i < n) {
            if (out.values[i] == 0) {
                std::size_t j = i;
                while (j < n && out.values[j] == 0) ++j;
                if (i > 0 && j - i < min_off) {
                    for (std::size_t k = i; k < j; ++k) out.values[k] = 1;
                }
                i = j;
            } else {
                ++i;
            }
        }
    }

    // Pass 2: short ON runs become OFF.
    if (min_on > 0) {
        std::size_t i = 0;
        while (i < n) {
            if (out.values[i] == 1) {
                std::size_t j = i;
                while (j < n && out.values[j] == 1) ++j;
                if (j - i < min_on) {
                    for (std::size_t k = i; k < j; ++k) out.values[k] = 0;
                }
                i = j;
            } else {
                ++i;
            }
        }
    }
    return out;
}

StatusSeries threshold_at(const PowerSeries& power, const ThresholdSpec& spec) {
    return duration_filter(apply_power_threshold(power, spec.lambda_watts), spec.mu_off_seconds,
                           spec.mu_on_seconds);
}

ThresholdSpec derive_threshold(std::span<const double> train_values, ThresholdMethod method,
                               const std::optional<ThresholdSpec>& at_spec) {
    switch (method) {
        case ThresholdMethod::MP: return threshold_mp(kmeans_1d_two(train_values));
        case ThresholdMethod::VS: return threshold_vs(kmeans_1d_two(train_values));
        case ThresholdMethod::AT: {
            if (!at_spec) {
                throw ConfigError("AT thresholding needs per-appliance lambda/mu parameters");
            }
            ThresholdSpec spec = *at_spec;
            spec.method = ThresholdMethod::AT;
            return spec;
        }
    }
    throw ConfigError("unknown threshold method");
}

StatusSeries apply_threshold(const PowerSeries& power, const ThresholdSpec& spec) {
    if (spec.method == ThresholdMethod::AT) return threshold_at(power, spec);
    return apply_power_threshold(power, spec.lambda_watts);
}

std::optional<ThresholdSpec> at_defaults_for(const std::string& appliance) {
    std::string lower = appliance;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    ThresholdSpec spec;
    spec.method = ThresholdMethod::AT;
    if (lower.find("fridge") != std::string::npos || lower.find("refrigerator") != std::string::npos) {
        spec.lambda_watts = 50.0;
        spec.mu_off_seconds = 1.0;
        spec.mu_on_seconds = 1.0;
        return spec;
    }
    if (lower.find("dish") != std::string::npos) {
        spec.lambda_watts = 10.0;
        spec.mu_off_seconds = 30.0;
        spec.mu_on_seconds = 30.0;
        return spec;
    }
    if (lower.find("wash") != std::string::npos) {
        spec.lambda_watts = 20.0;
        spec.mu_off_seconds = 3.0;
        spec.mu_on_seconds = 30.0;
        return spec;
    }
    return std::nullopt;
}

}  // namespace nilm
