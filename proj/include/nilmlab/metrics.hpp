#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nilm {

// Soft counts are allowed: the product formulas work on real-valued
// predictions as well as hard 0/1 labels.
struct ConfusionCounts {
    double tp = 0.0;
    double fp = 0.0;
    double fn = 0.0;
    double tn = 0.0;

    double total() const { return tp + fp + fn + tn; }
};

// scale_watts * mean(|pred - truth|). Pass the normalization reference to
// convert normalized outputs to watts, or 1 to score raw series.
double mae(std::span<const double> pred, std::span<const double> truth, double scale_watts = 1.0);

// 1 iff probability >= 0.5 (the boundary is ON).
std::vector<std::uint8_t> predicted_status(std::span<const double> prob);

ConfusionCounts confusion(std::span<const std::uint8_t> pred_status,
                          std::span<const std::uint8_t> truth_status);

ConfusionCounts confusion(std::span<const double> pred_status, std::span<const double> truth_status);

// F1 of one confusion; tp = fp = fn = 0 scores 1 (all-negative agreement).
double f1_score(const ConfusionCounts& counts);

// Mean of the per-series F1 scores.
double f1_per_series(std::span<const ConfusionCounts> series_confusions);

double precision(const ConfusionCounts& counts);
double recall(const ConfusionCounts& counts);

// Mann-Whitney rank statistic; ties contribute 0.5. Throws InputError when
// truth contains a single class.
double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> truth);

}  // namespace nilm
