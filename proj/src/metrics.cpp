#include "nilmlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nilmlab/errors.hpp"

namespace nilm {

double mae(std::span<const double> pred, std::span<const double> truth, double scale_watts) {
    if (pred.size() != truth.size()) {
        throw InputError("mae: prediction and truth lengths differ");
    }
    if (pred.empty()) throw InputError("mae: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) sum += std::abs(pred[i] - truth[i]);
    return scale_watts * sum / static_cast<double>(pred.size());
}

std::vector<std::uint8_t> predicted_status(std::span<const double> prob) {
    std::vector<std::uint8_t> out(prob.size());
    for (std::size_t i = 0; i < prob.size(); ++i) out[i] = prob[i] >= 0.5 ? 1 : 0;
    return out;
}

namespace {

template <typename T>
ConfusionCounts confusion_impl(std::span<const T> pred, std::span<const T> truth) {
    if (pred.size() != truth.size()) {
        throw InputError("confusion: prediction and truth lengths differ");
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double s = static_cast<double>(pred[i]);
        const double y = static_cast<double>(truth[i]);
        c.tp += s * y;
        c.fp += s * (1.0 - y);
        c.fn += (1.0 - s) * y;
        c.tn += (1.0 - s) * (1.0 - y);
    }
    return c;
}

}  // namespace

ConfusionCounts confusion(std::span<const std::uint8_t> pred_status,
                          std::span<const std::uint8_t> truth_status) {
    return confusion_impl(pred_status, truth_status);
}

ConfusionCounts confusion(std::span<const double> pred_status,
                          std::span<const double> truth_status) {
    return confusion_impl(pred_status, truth_status);
}

double f1_score(const ConfusionCounts& c) {
    const double denom = c.tp + 0.5 * (c.fp + c.fn);
    if (denom == 0.0) return 1.0;  // no positives anywhere and none predicted
    return c.tp / denom;
}

double f1_per_series(std::span<const ConfusionCounts> series_confusions) {
    if (series_confusions.empty()) throw InputError("f1_per_series: empty series list");
    double sum = 0.0;
    for (const auto& c : series_confusions) sum += f1_score(c);
    return sum / static_cast<double>(series_confusions.size());
}

double precision(const ConfusionCounts& c) {
    if (c.tp + c.fp == 0.0) return c.fn == 0.0 ? 1.0 : 0.0;
    return c.tp / (c.tp + c.fp);
}

double recall(const ConfusionCounts& c) {
    if (c.tp + c.fn == 0.0) return 1.0;
    return c.tp / (c.tp + c.fn);
}

double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> truth) {
    if (scores.size() != truth.size()) {
        throw InputError("roc_auc: score and truth lengths differ");
    }
    std::size_t n_pos = 0;
    for (const auto y : truth) n_pos += y;
    const std::size_t n_neg = truth.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw InputError("roc_auc: truth contains a single class, AUC undefined");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Rank-sum of the positive class with average ranks over tie groups.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1 .. j
        for (std::size_t k = i; k < j; ++k) {
            if (truth[order[k]]) rank_sum_pos += avg_rank;
        }
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

}  // namespace nilm
