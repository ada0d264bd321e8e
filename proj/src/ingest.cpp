#include "nilmlab/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

#include "nilmlab/errors.hpp"
#include "nilmlab/rng.hpp"

namespace nilm {

std::string to_string(SplitTag tag) {
    switch (tag) {
        case SplitTag::Train: return "train";
        case SplitTag::Validation: return "validation";
        case SplitTag::Test: return "test";
    }
    return "train";
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim spaces and a trailing CR
        std::size_t b = cell.find_first_not_of(" \t\r");
        std::size_t e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::optional<double> parse_cell(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw InputError("unparsable number '" + cell + "'");
    }
    return value;
}

}  // namespace

std::vector<PowerSeries> parse_power_csv(const std::filesystem::path& path,
                                         const CsvParseOptions& options, ParseReport* report) {
    std::ifstream file(path);
    if (!file) throw InputError("cannot open CSV file '" + path.string() + "'");

    ParseReport local_report;
    ParseReport& rep = report ? *report : local_report;

    std::string line;
    if (!std::getline(file, line)) throw InputError("CSV file '" + path.string() + "' is empty");
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 2) throw InputError("CSV header needs a time column and data columns");

    std::vector<std::string> wanted;
    wanted.push_back(options.aggregate_column);
    wanted.insert(wanted.end(), options.appliance_columns.begin(),
                  options.appliance_columns.end());

    std::vector<std::size_t> column_index;
    for (const auto& name : wanted) {
        auto it = std::find(header.begin() + 1, header.end(), name);
        if (it == header.end()) {
            throw ConfigError("column '" + name + "' not found in '" + path.string() + "'");
        }
        column_index.push_back(static_cast<std::size_t>(it - header.begin()));
    }

    // raw[c][t]: parsed cell or missing
    std::vector<std::vector<std::optional<double>>> raw(wanted.size());
    std::optional<double> prev_time;
    std::optional<double> time_stride;
    std::size_t row_number = 1;
    while (std::getline(file, line)) {
        ++row_number;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() < header.size()) {
            throw InputError("row " + std::to_string(row_number) + ": expected " +
                             std::to_string(header.size()) + " cells, got " +
                             std::to_string(cells.size()));
        }
        try {
            const std::optional<double> t = parse_cell(cells[0]);
            if (!t) {
                throw InputError("missing time value");
            }
            if (prev_time) {
                const double stride = *t - *prev_time;
                if (!time_stride) {
                    if (stride <= 0) throw InputError("non-increasing time column");
                    time_stride = stride;
                } else if (std::abs(stride - *time_stride) > 1e-9 * std::max(1.0, *time_stride)) {
                    throw InputError("non-constant time stride (" + std::to_string(stride) +
                                     " vs " + std::to_string(*time_stride) + ")");
                }
            }
            prev_time = t;
            for (std::size_t c = 0; c < wanted.size(); ++c) {
                raw[c].push_back(parse_cell(cells[column_index[c]]));
            }
        } catch (const InputError& err) {
            throw InputError("row " + std::to_string(row_number) + ": " + err.what());
        }
    }
    if (raw[0].empty()) throw InputError("CSV file '" + path.string() + "' has no data rows");

    std::vector<PowerSeries> out;
    for (std::size_t c = 0; c < wanted.size(); ++c) {
        // Forward-fill short gaps; longer gaps split the series.
        std::vector<double> values(raw[c].size());
        std::vector<bool> valid(raw[c].size(), true);
        std::optional<double> last;
        std::size_t gap = 0;
        for (std::size_t t = 0; t < raw[c].size(); ++t) {
            if (raw[c][t]) {
                values[t] = *raw[c][t];
                last = values[t];
                gap = 0;
            } else {
                ++gap;
                if (last && gap <= static_cast<std::size_t>(options.forward_fill_limit)) {
                    values[t] = *last;
                    ++rep.forward_filled;
                } else {
                    valid[t] = false;
                }
            }
        }
        // Longest contiguous valid segment.
        std::size_t best_begin = 0, best_len = 0, begin = 0, len = 0;
        for (std::size_t t = 0; t <= values.size(); ++t) {
            if (t < values.size() && valid[t]) {
                if (len == 0) begin = t;
                ++len;
                if (len > best_len) {
                    best_len = len;
                    best_begin = begin;
                }
            } else {
                len = 0;
            }
        }
        if (best_len == 0) {
            throw InputError("column '" + wanted[c] + "' has no usable samples");
        }
        if (best_len != values.size()) {
            ++rep.split_series;
            rep.warnings.push_back("column '" + wanted[c] + "': gap beyond fill limit, keeping " +
                                   std::to_string(best_len) + " of " +
                                   std::to_string(values.size()) + " samples (offset " +
                                   std::to_string(best_begin) + ")");
        }

        PowerSeries series;
        series.label = wanted[c];
        series.sampling.period_seconds = options.period_seconds;
        series.values.assign(values.begin() + static_cast<std::ptrdiff_t>(best_begin),
                             values.begin() + static_cast<std::ptrdiff_t>(best_begin + best_len));
        for (auto& v : series.values) {
            if (v < 0.0) {
                v = 0.0;
                ++rep.clamped_negative;
            }
        }
        out.push_back(std::move(series));
    }
    return out;
}

WindowPair normalize_pair(const WindowPair& pair, const NormalizationSpec& spec) {
    if (spec.reference_power_watts <= 0.0) {
        throw ConfigError("normalization reference power must be positive");
    }
    WindowPair out = pair;
    const double mean = std::accumulate(pair.input.begin(), pair.input.end(), 0.0) /
                        static_cast<double>(pair.input.size());
    out.window_mean_watts = mean;
    for (auto& v : out.input) v = (v - mean) / spec.reference_power_watts;
    if (pair.kind == PairKind::Regression) {
        for (auto& v : out.target) v /= spec.reference_power_watts;
    }
    return out;
}

std::vector<double> denormalize_input(const WindowPair& pair, const NormalizationSpec& spec) {
    std::vector<double> out(pair.input.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = pair.input[i] * spec.reference_power_watts + pair.window_mean_watts;
    }
    return out;
}

namespace {

void check_fractions(const SplitFractions& f) {
    if (f.train < 0 || f.validation < 0 || f.test < 0 ||
        f.train + f.validation + f.test > 1.0 + 1e-12) {
        throw ConfigError("split fractions must be nonnegative and sum to at most 1");
    }
}

}  // namespace

std::tuple<Dataset, Dataset, Dataset> chronological_split(
    const std::vector<std::vector<WindowPair>>& pairs_per_building, const SplitFractions& fractions,
    std::size_t val_test_building) {
    check_fractions(fractions);
    if (val_test_building >= pairs_per_building.size()) {
        throw ConfigError("validation/test building index " + std::to_string(val_test_building) +
                          " out of range (have " + std::to_string(pairs_per_building.size()) +
                          " buildings)");
    }
    Dataset train, val, test;
    train.split_tag = SplitTag::Train;
    val.split_tag = SplitTag::Validation;
    test.split_tag = SplitTag::Test;

    for (std::size_t b = 0; b < pairs_per_building.size(); ++b) {
        const auto& pairs = pairs_per_building[b];
        const std::size_t n = pairs.size();
        const std::size_t n_train =
            static_cast<std::size_t>(std::floor(fractions.train * static_cast<double>(n)));
        for (std::size_t i = 0; i < n_train; ++i) train.pairs.push_back(pairs[i]);
        if (b == val_test_building) {
            const std::size_t n_val =
                static_cast<std::size_t>(std::floor(fractions.validation * static_cast<double>(n)));
            const std::size_t n_test = static_cast<std::size_t>(std::floor(
                (fractions.train + fractions.validation + fractions.test) * static_cast<double>(n)));
            for (std::size_t i = n_train; i < n_train + n_val && i < n; ++i)
                val.pairs.push_back(pairs[i]);
            for (std::size_t i = n_train + n_val; i < n_test && i < n; ++i)
                test.pairs.push_back(pairs[i]);
        }
    }
    return {std::move(train), std::move(val), std::move(test)};
}

std::tuple<Dataset, Dataset, Dataset> random_split(const std::vector<WindowPair>& pairs,
                                                   const SplitFractions& fractions,
                                                   std::uint64_t seed) {
    check_fractions(fractions);
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(Rng::derive(seed, "random-split"));
    rng.shuffle(order);

    const std::size_t n = pairs.size();
    const std::size_t n_train =
        static_cast<std::size_t>(std::floor(fractions.train * static_cast<double>(n)));
    const std::size_t n_val =
        static_cast<std::size_t>(std::floor(fractions.validation * static_cast<double>(n)));
    const std::size_t n_total = static_cast<std::size_t>(
        std::floor((fractions.train + fractions.validation + fractions.test) * static_cast<double>(n)));

    Dataset train, val, test;
    train.split_tag = SplitTag::Train;
    val.split_tag = SplitTag::Validation;
    test.split_tag = SplitTag::Test;
    for (std::size_t i = 0; i < n_train; ++i) train.pairs.push_back(pairs[order[i]]);
    for (std::size_t i = n_train; i < n_train + n_val; ++i) val.pairs.push_back(pairs[order[i]]);
    for (std::size_t i = n_train + n_val; i < n_total && i < n; ++i)
        test.pairs.push_back(pairs[order[i]]);
    return {std::move(train), std::move(val), std::move(test)};
}

double activation_fraction(const Dataset& dataset) {
    std::size_t ones = 0, total = 0;
    for (const auto& pair : dataset.pairs) {
        for (const double v : pair.target) {
            ones += v != 0.0 ? 1 : 0;
            ++total;
        }
    }
    if (total == 0) throw InputError("activation_fraction: empty dataset");
    return 100.0 * static_cast<double>(ones) / static_cast<double>(total);
}

}  // namespace nilm
