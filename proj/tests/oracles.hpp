#pragma once

// Independent reference implementations used by the unit and acceptance
// suites. These deliberately avoid the library's algorithmic shortcuts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace nilm_test {

struct OracleClusters {
    double m0 = 0.0, m1 = 0.0, sigma0 = 0.0, sigma1 = 0.0;
    double sse = std::numeric_limits<double>::infinity();
};

// Exhaustive sorted-split 2-means: recomputes means and squared errors from
// scratch for every split, no prefix sums.
inline OracleClusters kmeans_oracle(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    OracleClusters best;
    for (std::size_t split = 1; split < n; ++split) {
        double mean0 = 0, mean1 = 0;
        for (std::size_t i = 0; i < split; ++i) mean0 += values[i];
        for (std::size_t i = split; i < n; ++i) mean1 += values[i];
        mean0 /= static_cast<double>(split);
        mean1 /= static_cast<double>(n - split);
        double sse0 = 0, sse1 = 0;
        for (std::size_t i = 0; i < split; ++i) sse0 += (values[i] - mean0) * (values[i] - mean0);
        for (std::size_t i = split; i < n; ++i) sse1 += (values[i] - mean1) * (values[i] - mean1);
        if (sse0 + sse1 < best.sse) {
            best = {mean0, mean1, std::sqrt(sse0 / static_cast<double>(split)),
                    std::sqrt(sse1 / static_cast<double>(n - split)), sse0 + sse1};
        }
    }
    return best;
}

// Literal restatement of the duration-filter rule on explicit run lists.
inline std::vector<std::uint8_t> duration_filter_oracle(std::vector<std::uint8_t> values,
                                                        std::size_t min_off, std::size_t min_on) {
    struct Run {
        std::uint8_t value;
        std::size_t begin, length;
    };
    auto runs_of = [](const std::vector<std::uint8_t>& v) {
        std::vector<Run> runs;
        for (std::size_t i = 0; i < v.size();) {
            std::size_t j = i;
            while (j < v.size() && v[j] == v[i]) ++j;
            runs.push_back({v[i], i, j - i});
            i = j;
        }
        return runs;
    };
    if (min_off > 0) {
        for (const Run& run : runs_of(values)) {
            if (run.value == 0 && run.begin > 0 && run.length < min_off) {
                // previous state of an interior OFF run is ON
                for (std::size_t i = run.begin; i < run.begin + run.length; ++i) values[i] = 1;
            }
        }
    }
    if (min_on > 0) {
        for (const Run& run : runs_of(values)) {
            if (run.value == 1 && run.length < min_on) {
                for (std::size_t i = run.begin; i < run.begin + run.length; ++i) values[i] = 0;
            }
        }
    }
    return values;
}

inline double mse_two_level(const std::vector<double>& power,
                            const std::vector<std::uint8_t>& status, double p_on, double p_off) {
    double sum = 0.0;
    for (std::size_t i = 0; i < power.size(); ++i) {
        const double r = status[i] ? p_on : p_off;
        sum += (power[i] - r) * (power[i] - r);
    }
    return sum / static_cast<double>(power.size());
}

}  // namespace nilm_test
