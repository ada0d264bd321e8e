#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nilmlab/ingest.hpp"
#include "nilmlab/model.hpp"
#include "nilmlab/reconstruction.hpp"
#include "nilmlab/synth.hpp"
#include "nilmlab/threshold.hpp"

namespace nilm {

// Flat key = value run configuration. Every key has a default; unknown keys
// are rejected except the per-appliance threshold.at.<name>.* family. The
// canonical text (sorted keys) is hashed into every report so reruns are
// byte-comparable.
class RunConfig {
public:
    RunConfig();  // defaults

    static RunConfig from_file(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value);
    // Accepts "key=value" as passed to --set.
    void set_pair(const std::string& pair);

    const std::string& get(const std::string& key) const;
    bool has(const std::string& key) const;

    std::string canonical_text() const;
    std::string hash_hex() const;

    // typed accessors (parse + validate)
    std::uint64_t seed() const;
    std::filesystem::path out_dir() const;
    std::vector<std::string> data_csv() const;
    std::string truth_csv() const;
    int data_period_seconds() const;
    std::string aggregate_column() const;
    std::vector<std::string> appliance_columns() const;
    int fill_limit() const;
    int resample_period_seconds() const;
    int window_overlap() const;
    int default_stride() const;  // input length - overlap
    int train_stride() const;    // defaults to default_stride()
    NormalizationSpec normalization() const;
    std::string split_mode() const;  // "chronological" | "random"
    SplitFractions split_fractions() const;
    std::size_t val_test_building() const;
    ThresholdMethod threshold_method() const;
    std::string threshold_resolution() const;  // "resampled" | "native"
    LevelsMode levels_mode() const;
    // AT parameters for one appliance: config override, then the built-in
    // per-appliance defaults; ConfigError when neither exists.
    ThresholdSpec at_spec_for(const std::string& appliance) const;
    double width_scale() const;
    int epochs() const;
    int batch() const;
    double learning_rate() const;
    LossWeights loss_weights() const;
    std::vector<double> sweep_w_list() const;
    int sweep_repetitions() const;
    double synth_days() const;
    double synth_residual_sd() const;
    std::vector<ApplianceProfile> synth_profiles() const;
    std::string checkpoint_dir() const;  // empty -> out_dir

    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace nilm
