#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "nilmlab/series.hpp"

namespace nilm {

enum class SplitTag { Train, Validation, Test };

std::string to_string(SplitTag tag);

struct Dataset {
    std::vector<WindowPair> pairs;
    SplitTag split_tag = SplitTag::Train;
    std::string appliance;
};

struct NormalizationSpec {
    double reference_power_watts = 2000.0;
};

struct SplitFractions {
    double train = 0.8;
    double validation = 0.1;
    double test = 0.1;
};

struct CsvParseOptions {
    // Column name holding the aggregate load; remaining mapped columns are
    // appliances.
    std::string aggregate_column = "aggregate";
    std::vector<std::string> appliance_columns;
    int period_seconds = 60;
    // Missing cells are forward-filled up to this many consecutive samples;
    // a longer gap splits the series and only the longest contiguous
    // segment survives.
    int forward_fill_limit = 5;
};

struct ParseReport {
    std::size_t clamped_negative = 0;
    std::size_t forward_filled = 0;
    std::size_t split_series = 0;  // columns cut down to their longest segment
    std::vector<std::string> warnings;
};

// Reads a meter-export CSV (header row; first column is a timestamp or
// sample index with constant stride; remaining columns are watts). Returns
// the aggregate first, then appliances in the requested order.
std::vector<PowerSeries> parse_power_csv(const std::filesystem::path& path,
                                         const CsvParseOptions& options,
                                         ParseReport* report = nullptr);

// input <- (input - mean(input)) / reference; window_mean_watts <- mean.
// Regression targets are divided by the reference; classification targets
// are binary and stay untouched.
WindowPair normalize_pair(const WindowPair& pair, const NormalizationSpec& spec);

// Recovers the raw input window from a normalized pair.
std::vector<double> denormalize_input(const WindowPair& pair, const NormalizationSpec& spec);

// First train fraction of every building's windows; validation and test
// are the subsequent slices of the designated building only. Train and
// validation sizes round down, the remainder goes to test.
std::tuple<Dataset, Dataset, Dataset> chronological_split(
    const std::vector<std::vector<WindowPair>>& pairs_per_building, const SplitFractions& fractions,
    std::size_t val_test_building);

// Seeded Fisher-Yates shuffle, then fraction split.
std::tuple<Dataset, Dataset, Dataset> random_split(const std::vector<WindowPair>& pairs,
                                                   const SplitFractions& fractions,
                                                   std::uint64_t seed);

// Percentage of ON entries over all classification targets.
double activation_fraction(const Dataset& dataset);

}  // namespace nilm
