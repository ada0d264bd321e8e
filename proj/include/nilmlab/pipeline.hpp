#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nilmlab/config.hpp"
#include "nilmlab/ingest.hpp"
#include "nilmlab/model.hpp"
#include "nilmlab/reconstruction.hpp"
#include "nilmlab/series.hpp"
#include "nilmlab/synth.hpp"
#include "nilmlab/threshold.hpp"

namespace nilm {

// Everything the training and evaluation steps need, derived once from the
// configuration: per-building series, canonical windows, split boundaries,
// thresholds for all three methods and the zipped samples for the
// configured one.
struct PreparedAppliance {
    std::string name;

    std::array<ThresholdSpec, 3> specs;  // indexed by ThresholdMethod

    std::vector<Sample> train_samples;  // dense stride inside the train span
    std::vector<Sample> val_samples;
    std::vector<Sample> test_samples;

    // canonical train windows (raw watts + per-method truth), used for
    // thresholds, reconstruction levels and train-side intrinsic error
    std::vector<std::vector<double>> train_power_watts;
    std::array<std::vector<std::vector<std::uint8_t>>, 3> train_truth;

    // per test window
    std::vector<std::vector<double>> test_power_watts;
    std::array<std::vector<std::vector<std::uint8_t>>, 3> test_truth;
    std::vector<std::pair<std::size_t, std::size_t>> test_origin;  // (building, target start)

    double activation_fraction_train_pct = 0.0;  // configured method
};

struct PreparedData {
    std::vector<std::string> appliance_names;
    std::vector<PreparedAppliance> appliances;
    // working-resolution series per building, for overlay exports
    std::vector<PowerSeries> aggregates;
    std::vector<std::vector<PowerSeries>> appliance_series;  // [building][appliance]
    std::vector<std::size_t> canonical_counts;               // windows per building
    std::vector<std::size_t> train_counts;                   // canonical train windows per building
};

// Loads the CSVs, resamples, windows, splits and thresholds per the config.
PreparedData prepare_data(const RunConfig& config);

// Subcommand bodies. Each writes its files under config.out_dir() and
// returns the machine-readable report (also written when `write` is true).
nlohmann::json run_synth(const RunConfig& config, bool write = true);
nlohmann::json run_threshold(const RunConfig& config, bool write = true);
nlohmann::json run_train(const RunConfig& config, bool write = true);
nlohmann::json run_evaluate(const RunConfig& config, bool write = true);
nlohmann::json run_sweep(const RunConfig& config, bool write = true);

// Shortest round-trip decimal text for doubles; shared by every CSV writer
// so reruns are byte-identical.
std::string format_double(double value);

}  // namespace nilm
