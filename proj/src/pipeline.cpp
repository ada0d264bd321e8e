#include "nilmlab/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "nilmlab/errors.hpp"
#include "nilmlab/metrics.hpp"
#include "nilmlab/rng.hpp"

namespace nilm {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) return "0";
    return std::string(buf, ptr);
}

namespace {

constexpr std::array<ThresholdMethod, 3> kMethods = {ThresholdMethod::MP, ThresholdMethod::VS,
                                                     ThresholdMethod::AT};

std::size_t midx(ThresholdMethod m) { return static_cast<std::size_t>(m); }

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory '" + dir.string() + "'");
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("failed writing '" + path.string() + "'");
}

void write_json(const fs::path& path, const json& doc) {
    write_file(path, doc.dump(2) + "\n");
}

// Reads just the header row of a CSV.
std::vector<std::string> csv_header(const fs::path& path) {
    std::ifstream file(path);
    if (!file) throw InputError("cannot open CSV file '" + path.string() + "'");
    std::string line;
    if (!std::getline(file, line)) throw InputError("CSV file '" + path.string() + "' is empty");
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const std::size_t b = cell.find_first_not_of(" \t\r");
        const std::size_t e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return cells;
}

struct BuildingSeries {
    PowerSeries aggregate;                 // working resolution
    std::vector<PowerSeries> appliances;   // working resolution
    std::vector<PowerSeries> native;       // pre-resample appliances (native mode only)
};

struct LoadedData {
    std::vector<std::string> appliance_names;
    std::vector<BuildingSeries> buildings;
    int native_to_working = 1;  // resample factor
};

LoadedData load_buildings(const RunConfig& config) {
    LoadedData out;
    const int src_period = config.data_period_seconds();
    const int dst_period = config.resample_period_seconds();
    const bool native_mode = config.threshold_resolution() == "native";
    const SamplingSpec working{dst_period};

    std::vector<std::string> columns = config.appliance_columns();
    for (const std::string& path : config.data_csv()) {
        if (columns.empty()) {
            const std::vector<std::string> header = csv_header(path);
            for (std::size_t i = 1; i < header.size(); ++i) {
                if (header[i] != config.aggregate_column()) columns.push_back(header[i]);
            }
            if (columns.empty()) {
                throw InputError("CSV '" + path + "' has no appliance columns");
            }
        }
        CsvParseOptions options;
        options.aggregate_column = config.aggregate_column();
        options.appliance_columns = columns;
        options.period_seconds = src_period;
        options.forward_fill_limit = config.fill_limit();
        ParseReport report;
        std::vector<PowerSeries> series = parse_power_csv(path, options, &report);
        for (const std::string& warning : report.warnings) {
            std::fprintf(stderr, "warning: %s: %s\n", path.c_str(), warning.c_str());
        }

        BuildingSeries building;
        if (dst_period != src_period) {
            building.aggregate = resample_mean(series[0], working);
            for (std::size_t i = 1; i < series.size(); ++i) {
                building.appliances.push_back(resample_mean(series[i], working));
            }
        } else {
            building.aggregate = std::move(series[0]);
            for (std::size_t i = 1; i < series.size(); ++i) {
                building.appliances.push_back(std::move(series[i]));
            }
        }
        if (native_mode && dst_period != src_period) {
            // reload is avoided: keep the pre-resample copies
            std::vector<PowerSeries> fresh = parse_power_csv(path, options, nullptr);
            building.native.assign(fresh.begin() + 1, fresh.end());
        }
        out.buildings.push_back(std::move(building));
    }
    out.appliance_names = columns;
    out.native_to_working = dst_period / src_period;
    return out;
}

// Canonical split bookkeeping over (building, window-start) pairs.
struct SplitPlan {
    std::vector<std::size_t> counts;        // canonical windows per building
    std::vector<std::size_t> train_counts;  // chronological per-building train size
    // membership lists as (building, start-sample) pairs, time order
    std::vector<std::pair<std::size_t, std::size_t>> train, val, test;
};

SplitPlan plan_split(const RunConfig& config, const LoadedData& data, int stride) {
    SplitPlan plan;
    const SplitFractions fractions = config.split_fractions();
    if (fractions.train < 0 || fractions.validation < 0 || fractions.test < 0 ||
        fractions.train + fractions.validation + fractions.test > 1.0 + 1e-12) {
        throw ConfigError("split fractions must be nonnegative and sum to at most 1");
    }
    const std::size_t designated = config.val_test_building();
    if (designated >= data.buildings.size()) {
        throw ConfigError("split.val_test_building out of range");
    }
    for (const BuildingSeries& b : data.buildings) {
        const int n = window_count(b.aggregate.size(), stride);
        if (n < 1) {
            throw InputError("building series too short for one window (need " +
                             std::to_string(WindowPair::kInputLength) + " samples at the working period)");
        }
        plan.counts.push_back(static_cast<std::size_t>(n));
    }

    if (config.split_mode() == "chronological") {
        for (std::size_t b = 0; b < plan.counts.size(); ++b) {
            const std::size_t n = plan.counts[b];
            const std::size_t n_train =
                static_cast<std::size_t>(std::floor(fractions.train * static_cast<double>(n)));
            plan.train_counts.push_back(n_train);
            for (std::size_t w = 0; w < n_train; ++w) {
                plan.train.emplace_back(b, w * static_cast<std::size_t>(stride));
            }
            if (b == designated) {
                const std::size_t n_val = static_cast<std::size_t>(
                    std::floor(fractions.validation * static_cast<double>(n)));
                const std::size_t end = static_cast<std::size_t>(std::floor(
                    (fractions.train + fractions.validation + fractions.test) *
                    static_cast<double>(n)));
                for (std::size_t w = n_train; w < n_train + n_val && w < n; ++w) {
                    plan.val.emplace_back(b, w * static_cast<std::size_t>(stride));
                }
                for (std::size_t w = n_train + n_val; w < end && w <= n - 1; ++w) {
                    plan.test.emplace_back(b, w * static_cast<std::size_t>(stride));
                }
            }
        }
    } else {
        std::vector<std::pair<std::size_t, std::size_t>> all;
        for (std::size_t b = 0; b < plan.counts.size(); ++b) {
            for (std::size_t w = 0; w < plan.counts[b]; ++w) {
                all.emplace_back(b, w * static_cast<std::size_t>(stride));
            }
            plan.train_counts.push_back(0);  // filled below
        }
        Rng rng(Rng::derive(config.seed(), "random-split"));
        rng.shuffle(all);
        const std::size_t n = all.size();
        const std::size_t n_train =
            static_cast<std::size_t>(std::floor(fractions.train * static_cast<double>(n)));
        const std::size_t n_val =
            static_cast<std::size_t>(std::floor(fractions.validation * static_cast<double>(n)));
        const std::size_t end = static_cast<std::size_t>(std::floor(
            (fractions.train + fractions.validation + fractions.test) * static_cast<double>(n)));
        plan.train.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
        plan.val.assign(all.begin() + static_cast<std::ptrdiff_t>(n_train),
                        all.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
        plan.test.assign(all.begin() + static_cast<std::ptrdiff_t>(n_train + n_val),
                         all.begin() + static_cast<std::ptrdiff_t>(std::min(end, n)));
        for (const auto& [b, start] : plan.train) ++plan.train_counts[b];
    }
    return plan;
}

std::vector<double> slice(const std::vector<double>& series, std::size_t begin, std::size_t count) {
    return {series.begin() + static_cast<std::ptrdiff_t>(begin),
            series.begin() + static_cast<std::ptrdiff_t>(begin + count)};
}

std::vector<std::uint8_t> slice(const std::vector<std::uint8_t>& series, std::size_t begin,
                                std::size_t count) {
    return {series.begin() + static_cast<std::ptrdiff_t>(begin),
            series.begin() + static_cast<std::ptrdiff_t>(begin + count)};
}

constexpr std::size_t kIn = WindowPair::kInputLength;
constexpr std::size_t kOut = WindowPair::kOutputLength;
constexpr std::size_t kOff = WindowPair::kTargetOffset;

Sample make_sample(const PowerSeries& aggregate, const PowerSeries& appliance,
                   const StatusSeries& status, std::size_t start, const NormalizationSpec& norm) {
    WindowPair pair;
    pair.kind = PairKind::Regression;
    pair.input = slice(aggregate.values, start, kIn);
    pair.target = slice(appliance.values, start + kOff, kOut);
    pair = normalize_pair(pair, norm);

    Sample sample;
    sample.input = std::move(pair.input);
    sample.power_target = std::move(pair.target);
    const std::vector<std::uint8_t> st = slice(status.values, start + kOff, kOut);
    sample.status_target.assign(st.begin(), st.end());
    return sample;
}

}  // namespace

PreparedData prepare_data(const RunConfig& config) {
    const LoadedData loaded = load_buildings(config);
    const int stride = config.default_stride();
    const int train_stride = config.train_stride();
    const NormalizationSpec norm = config.normalization();
    const ThresholdMethod cfg_method = config.threshold_method();
    const bool native_mode = config.threshold_resolution() == "native";
    const SplitPlan plan = plan_split(config, loaded, stride);
    const std::size_t k_native = static_cast<std::size_t>(loaded.native_to_working);

    PreparedData out;
    out.appliance_names = loaded.appliance_names;
    out.canonical_counts = plan.counts;
    out.train_counts = plan.train_counts;
    for (const BuildingSeries& b : loaded.buildings) {
        out.aggregates.push_back(b.aggregate);
        out.appliance_series.push_back(b.appliances);
    }

    for (std::size_t a = 0; a < loaded.appliance_names.size(); ++a) {
        PreparedAppliance app;
        app.name = loaded.appliance_names[a];

        // training power values for threshold derivation
        std::vector<double> train_values;
        for (const auto& [b, start] : plan.train) {
            const std::vector<double>& src =
                native_mode && !loaded.buildings[b].native.empty()
                    ? loaded.buildings[b].native[a].values
                    : loaded.buildings[b].appliances[a].values;
            const std::size_t scale = native_mode && !loaded.buildings[b].native.empty() ? k_native : 1;
            const std::size_t begin = (start + kOff) * scale;
            const std::size_t count = kOut * scale;
            train_values.insert(train_values.end(),
                                src.begin() + static_cast<std::ptrdiff_t>(begin),
                                src.begin() + static_cast<std::ptrdiff_t>(begin + count));
        }

        app.specs[midx(ThresholdMethod::MP)] =
            derive_threshold(train_values, ThresholdMethod::MP);
        app.specs[midx(ThresholdMethod::VS)] =
            derive_threshold(train_values, ThresholdMethod::VS);
        app.specs[midx(ThresholdMethod::AT)] = derive_threshold(
            train_values, ThresholdMethod::AT, config.at_spec_for(app.name));

        // status series per method per building at the working resolution
        std::array<std::vector<StatusSeries>, 3> status;
        for (const ThresholdMethod m : kMethods) {
            for (std::size_t b = 0; b < loaded.buildings.size(); ++b) {
                const BuildingSeries& building = loaded.buildings[b];
                StatusSeries s;
                if (native_mode && !building.native.empty()) {
                    s = resample_status(apply_threshold(building.native[a], app.specs[midx(m)]),
                                        building.aggregate.sampling);
                } else {
                    s = apply_threshold(building.appliances[a], app.specs[midx(m)]);
                }
                status[midx(m)].push_back(std::move(s));
            }
        }

        // training samples, densified inside the chronological train span
        if (config.split_mode() == "chronological" && train_stride != stride) {
            for (std::size_t b = 0; b < loaded.buildings.size(); ++b) {
                if (plan.train_counts[b] == 0) continue;
                const std::size_t last_start =
                    (plan.train_counts[b] - 1) * static_cast<std::size_t>(stride);
                for (std::size_t s = 0; s <= last_start;
                     s += static_cast<std::size_t>(train_stride)) {
                    app.train_samples.push_back(
                        make_sample(loaded.buildings[b].aggregate, loaded.buildings[b].appliances[a],
                                    status[midx(cfg_method)][b], s, norm));
                }
            }
        } else {
            for (const auto& [b, start] : plan.train) {
                app.train_samples.push_back(
                    make_sample(loaded.buildings[b].aggregate, loaded.buildings[b].appliances[a],
                                status[midx(cfg_method)][b], start, norm));
            }
        }
        for (const auto& [b, start] : plan.val) {
            app.val_samples.push_back(
                make_sample(loaded.buildings[b].aggregate, loaded.buildings[b].appliances[a],
                            status[midx(cfg_method)][b], start, norm));
        }
        for (const auto& [b, start] : plan.test) {
            app.test_samples.push_back(
                make_sample(loaded.buildings[b].aggregate, loaded.buildings[b].appliances[a],
                            status[midx(cfg_method)][b], start, norm));
        }

        // canonical train + test extras
        for (const auto& [b, start] : plan.train) {
            app.train_power_watts.push_back(
                slice(loaded.buildings[b].appliances[a].values, start + kOff, kOut));
            for (const ThresholdMethod m : kMethods) {
                app.train_truth[midx(m)].push_back(
                    slice(status[midx(m)][b].values, start + kOff, kOut));
            }
        }
        for (const auto& [b, start] : plan.test) {
            app.test_power_watts.push_back(
                slice(loaded.buildings[b].appliances[a].values, start + kOff, kOut));
            for (const ThresholdMethod m : kMethods) {
                app.test_truth[midx(m)].push_back(
                    slice(status[midx(m)][b].values, start + kOff, kOut));
            }
            app.test_origin.emplace_back(b, start + kOff);
        }

        // Table-3 style activation fraction over the canonical train windows
        std::size_t ones = 0, total = 0;
        for (const auto& w : app.train_truth[midx(cfg_method)]) {
            for (const std::uint8_t v : w) ones += v;
            total += w.size();
        }
        app.activation_fraction_train_pct =
            total == 0 ? 0.0 : 100.0 * static_cast<double>(ones) / static_cast<double>(total);

        out.appliances.push_back(std::move(app));
    }
    return out;
}

// ---- synth ----------------------------------------------------------------

json run_synth(const RunConfig& config, bool write) {
    const std::vector<ApplianceProfile> profiles = config.synth_profiles();
    const int period = config.data_period_seconds();
    const std::size_t length =
        static_cast<std::size_t>(std::llround(config.synth_days() * 86400.0 / period));
    if (length < WindowPair::kInputLength) {
        throw ConfigError("synth.days too small: yields " + std::to_string(length) +
                          " samples, need at least " + std::to_string(WindowPair::kInputLength));
    }
    const SamplingSpec sampling{period};
    const SynthHousehold household = generate_household(
        profiles, config.synth_residual_sd(), length, sampling, Rng::derive(config.seed(), "synth"));

    json report;
    report["config_hash"] = config.hash_hex();
    report["samples"] = length;
    report["period_seconds"] = period;
    json appliances = json::array();
    for (std::size_t a = 0; a < profiles.size(); ++a) {
        const auto& truth = household.appliances[a].truth.values;
        const std::size_t ones = std::accumulate(truth.begin(), truth.end(), std::size_t{0});
        json item;
        item["name"] = profiles[a].name;
        item["kind"] = to_string(profiles[a].kind);
        item["on_watts"] = profiles[a].on_watts;
        item["true_activation_pct"] =
            100.0 * static_cast<double>(ones) / static_cast<double>(length);
        appliances.push_back(item);
    }
    report["appliances"] = appliances;

    if (write) {
        ensure_dir(config.out_dir());
        std::string csv = "t," + config.aggregate_column();
        std::string truth_csv = "t";
        for (const auto& p : profiles) {
            csv += "," + p.name;
            truth_csv += "," + p.name;
        }
        csv += '\n';
        truth_csv += '\n';
        for (std::size_t i = 0; i < length; ++i) {
            csv += std::to_string(static_cast<long long>(i) * period);
            csv += ',';
            csv += format_double(household.aggregate.values[i]);
            truth_csv += std::to_string(static_cast<long long>(i) * period);
            for (std::size_t a = 0; a < profiles.size(); ++a) {
                csv += ',';
                csv += format_double(household.appliances[a].power.values[i]);
                truth_csv += ',';
                truth_csv += household.appliances[a].truth.values[i] ? '1' : '0';
            }
            csv += '\n';
            truth_csv += '\n';
        }
        write_file(config.out_dir() / "synth_household.csv", csv);
        write_file(config.out_dir() / "synth_truth.csv", truth_csv);
        write_json(config.out_dir() / "synth_report.json", report);
    }
    return report;
}

// ---- threshold --------------------------------------------------------------

namespace {

// Optional ground-truth statuses (synthetic data only).
std::vector<StatusSeries> load_truth(const RunConfig& config,
                                     const std::vector<std::string>& appliances) {
    const std::string path = config.truth_csv();
    if (path.empty()) return {};
    CsvParseOptions options;
    // the truth file reuses the power-CSV schema with 0/1 cells
    options.aggregate_column = appliances.front();
    options.appliance_columns.assign(appliances.begin() + 1, appliances.end());
    options.period_seconds = config.data_period_seconds();
    std::vector<PowerSeries> series = parse_power_csv(path, options, nullptr);
    std::vector<StatusSeries> out;
    for (const PowerSeries& s : series) {
        StatusSeries status;
        status.sampling = s.sampling;
        status.values.resize(s.values.size());
        for (std::size_t i = 0; i < s.values.size(); ++i) status.values[i] = s.values[i] >= 0.5;
        if (config.resample_period_seconds() != config.data_period_seconds()) {
            status = resample_status(status, SamplingSpec{config.resample_period_seconds()});
        }
        out.push_back(std::move(status));
    }
    return out;
}

}  // namespace

json run_threshold(const RunConfig& config, bool write) {
    const PreparedData data = prepare_data(config);
    const std::vector<StatusSeries> truth = load_truth(config, data.appliance_names);

    json records = json::array();
    for (std::size_t a = 0; a < data.appliances.size(); ++a) {
        const PreparedAppliance& app = data.appliances[a];
        for (const ThresholdMethod m : kMethods) {
            const ThresholdSpec& spec = app.specs[midx(m)];
            json rec;
            rec["appliance"] = app.name;
            rec["method"] = to_string(m);
            rec["lambda_watts"] = spec.lambda_watts;
            rec["mu_off_seconds"] = spec.mu_off_seconds;
            rec["mu_on_seconds"] = spec.mu_on_seconds;
            if (spec.clusters) {
                rec["m0"] = spec.clusters->m0;
                rec["m1"] = spec.clusters->m1;
                rec["sigma0"] = spec.clusters->sigma0;
                rec["sigma1"] = spec.clusters->sigma1;
            } else {
                rec["m0"] = nullptr;
                rec["m1"] = nullptr;
                rec["sigma0"] = nullptr;
                rec["sigma1"] = nullptr;
            }
            // Table-3 style fraction for this method over the train windows
            std::size_t ones = 0, total = 0;
            for (const auto& w : app.train_truth[midx(m)]) {
                for (const std::uint8_t v : w) ones += v;
                total += w.size();
            }
            rec["activation_fraction_train_pct"] =
                total == 0 ? 0.0 : 100.0 * static_cast<double>(ones) / static_cast<double>(total);

            if (!truth.empty() && data.aggregates.size() == 1) {
                // status per method over building 0 vs synthetic ground truth
                const StatusSeries method_status = [&] {
                    PowerSeries series = data.appliance_series[0][a];
                    return apply_threshold(series, spec);
                }();
                const std::size_t n = std::min(method_status.size(), truth[a].size());
                ConfusionCounts cc = confusion(
                    std::span<const std::uint8_t>(method_status.values.data(), n),
                    std::span<const std::uint8_t>(truth[a].values.data(), n));
                rec["f1_vs_truth"] = f1_score(cc);
            } else {
                rec["f1_vs_truth"] = nullptr;
            }
            records.push_back(rec);
        }
    }

    json report;
    report["config_hash"] = config.hash_hex();
    report["records"] = records;

    if (write) {
        ensure_dir(config.out_dir());
        write_json(config.out_dir() / "threshold_report.json", report);
        // Status overlay: per appliance, full working-resolution series.
        for (std::size_t a = 0; a < data.appliance_names.size(); ++a) {
            const PreparedAppliance& app = data.appliances[a];
            std::string csv = "time_index,building,power_watts,status_mp,status_vs,status_at\n";
            for (std::size_t b = 0; b < data.appliance_series.size(); ++b) {
                const PowerSeries& series = data.appliance_series[b][a];
                std::array<StatusSeries, 3> status;
                for (const ThresholdMethod m : kMethods) {
                    status[midx(m)] = apply_threshold(series, app.specs[midx(m)]);
                }
                for (std::size_t i = 0; i < series.size(); ++i) {
                    csv += std::to_string(i);
                    csv += ',';
                    csv += std::to_string(b);
                    csv += ',';
                    csv += format_double(series.values[i]);
                    for (const ThresholdMethod m : kMethods) {
                        csv += ',';
                        csv += status[midx(m)].values[i] ? '1' : '0';
                    }
                    csv += '\n';
                }
            }
            write_file(config.out_dir() / ("threshold_overlay_" + app.name + ".csv"), csv);
        }
    }
    return report;
}

// ---- train ----------------------------------------------------------------

namespace {

TrainOptions train_options(const RunConfig& config, const std::string& appliance,
                           const LossWeights& weights, std::uint64_t base_seed) {
    TrainOptions options;
    options.epochs = config.epochs();
    options.batch = config.batch();
    options.lr = config.learning_rate();
    options.weights = weights;
    options.seed = Rng::derive(base_seed, "train:" + appliance);
    options.denorm_scale_watts = config.normalization().reference_power_watts;
    return options;
}

ConvModel build_model(const RunConfig& config, const std::string& appliance,
                      std::uint64_t base_seed) {
    ConvModelConfig mc;
    mc.width_scale = config.width_scale();
    mc.init_seed = Rng::derive(base_seed, "init:" + appliance);
    return ConvModel::build(mc);
}

std::string history_csv(const TrainResult& result) {
    std::string csv = "epoch,train_loss,val_loss,val_f1,val_mae_watts\n";
    for (const EpochStats& row : result.history) {
        csv += std::to_string(row.epoch);
        csv += ',';
        csv += format_double(row.train_loss);
        csv += ',';
        csv += format_double(row.val_loss);
        csv += ',';
        csv += format_double(row.val_f1);
        csv += ',';
        csv += format_double(row.val_mae_watts);
        csv += '\n';
    }
    return csv;
}

}  // namespace

json run_train(const RunConfig& config, bool write) {
    const PreparedData data = prepare_data(config);
    const LossWeights weights = config.loss_weights();

    json report;
    report["config_hash"] = config.hash_hex();
    json entries = json::array();
    if (write) ensure_dir(config.out_dir());

    for (const PreparedAppliance& app : data.appliances) {
        ConvModel model = build_model(config, app.name, config.seed());
        const TrainOptions options = train_options(config, app.name, weights, config.seed());
        const TrainResult result = train(model, app.train_samples, app.val_samples, options);

        json entry;
        entry["appliance"] = app.name;
        entry["epochs"] = options.epochs;
        entry["loss_w"] = weights.w;
        entry["best_epoch"] = result.best_epoch;
        entry["best_val_loss"] = result.best_val_loss;
        entry["train_windows"] = app.train_samples.size();
        entry["val_windows"] = app.val_samples.size();
        entry["checkpoint"] = (config.out_dir() / ("model_" + app.name + ".ckpt")).string();
        entries.push_back(entry);

        if (write) {
            model.save(config.out_dir() / ("model_" + app.name + ".ckpt"));
            write_file(config.out_dir() / ("history_" + app.name + ".csv"), history_csv(result));
        }
    }
    report["models"] = entries;
    if (write) write_json(config.out_dir() / "train_report.json", report);
    return report;
}

// ---- evaluate ---------------------------------------------------------------

namespace {

struct EvalCell {
    json record;
    std::string reconstruction_csv;
};

double mean_abs_vs(const std::vector<std::vector<double>>& windows,
                   const std::vector<std::vector<double>>& other) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t w = 0; w < windows.size(); ++w) {
        for (std::size_t i = 0; i < windows[w].size(); ++i) {
            sum += std::abs(windows[w][i] - other[w][i]);
            ++n;
        }
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

}  // namespace

json run_evaluate(const RunConfig& config, bool write) {
    const PreparedData data = prepare_data(config);
    const NormalizationSpec norm = config.normalization();
    const LevelsMode levels_mode = config.levels_mode();
    const fs::path ckpt_dir = config.checkpoint_dir();

    json report;
    report["config_hash"] = config.hash_hex();
    report["model"] = "conv";
    report["loss_w"] = config.loss_weights().w;
    json cells = json::array();
    json recon_records = json::array();
    if (write) ensure_dir(config.out_dir());

    for (const PreparedAppliance& app : data.appliances) {
        const fs::path ckpt = ckpt_dir / ("model_" + app.name + ".ckpt");
        ConvModel model = ConvModel::load(ckpt);
        if (app.test_samples.empty()) {
            throw InputError("test split is empty; adjust split fractions");
        }
        const Predictions preds = predict(model, app.test_samples, config.batch());

        // regression MAE in watts (method independent)
        double reg_abs = 0.0;
        std::size_t reg_n = 0;
        for (std::size_t w = 0; w < preds.power_norm.size(); ++w) {
            for (std::size_t i = 0; i < preds.power_norm[w].size(); ++i) {
                reg_abs += std::abs(preds.power_norm[w][i] - app.test_samples[w].power_target[i]);
                ++reg_n;
            }
        }
        const double reg_mae_watts =
            norm.reference_power_watts * reg_abs / static_cast<double>(reg_n);

        // predicted statuses and predicted watts per window
        std::vector<std::vector<std::uint8_t>> pred_status;
        std::vector<std::vector<double>> pred_watts;
        for (const auto& probs : preds.prob_on) pred_status.push_back(predicted_status(probs));
        for (const auto& pw : preds.power_norm) {
            std::vector<double> watts(pw.size());
            for (std::size_t i = 0; i < pw.size(); ++i) {
                watts[i] = pw[i] * norm.reference_power_watts;
            }
            pred_watts.push_back(std::move(watts));
        }

        // flatten train side once per method for levels
        for (const ThresholdMethod m : kMethods) {
            std::vector<double> train_watts_flat;
            std::vector<std::uint8_t> train_truth_flat;
            for (std::size_t w = 0; w < app.train_power_watts.size(); ++w) {
                train_watts_flat.insert(train_watts_flat.end(), app.train_power_watts[w].begin(),
                                        app.train_power_watts[w].end());
                train_truth_flat.insert(train_truth_flat.end(), app.train_truth[midx(m)][w].begin(),
                                        app.train_truth[midx(m)][w].end());
            }
            const OnOffLevels levels = compute_levels(train_watts_flat, train_truth_flat, levels_mode);
            if (levels.inverted) {
                std::fprintf(stderr, "warning: %s/%s: ON level below OFF level\n",
                             app.name.c_str(), to_string(m).c_str());
            }

            // classification metrics vs this method's ground truth
            std::vector<ConfusionCounts> confusions;
            ConfusionCounts pooled;
            std::vector<double> probs_flat;
            std::vector<std::uint8_t> truth_flat;
            for (std::size_t w = 0; w < pred_status.size(); ++w) {
                const ConfusionCounts cc =
                    confusion(std::span<const std::uint8_t>(pred_status[w]),
                              std::span<const std::uint8_t>(app.test_truth[midx(m)][w]));
                confusions.push_back(cc);
                pooled.tp += cc.tp;
                pooled.fp += cc.fp;
                pooled.fn += cc.fn;
                pooled.tn += cc.tn;
                probs_flat.insert(probs_flat.end(), preds.prob_on[w].begin(),
                                  preds.prob_on[w].end());
                truth_flat.insert(truth_flat.end(), app.test_truth[midx(m)][w].begin(),
                                  app.test_truth[midx(m)][w].end());
            }
            const double f1 = f1_per_series(confusions);
            json auc = nullptr;
            try {
                auc = roc_auc(probs_flat, truth_flat);
            } catch (const InputError&) {
                auc = nullptr;  // single-class truth
            }

            // reconstructed power from the predicted status
            std::vector<std::vector<double>> recon;
            for (const auto& st : pred_status) recon.push_back(reconstruct_binary(st, levels));
            const double recon_mae = mean_abs_vs(recon, app.test_power_watts);

            // thresholded regression output vs this method's truth
            std::vector<ConfusionCounts> reg_confusions;
            for (std::size_t w = 0; w < pred_watts.size(); ++w) {
                PowerSeries window;
                window.values = pred_watts[w];
                window.sampling = SamplingSpec{config.resample_period_seconds()};
                window.label = app.name;
                // negative regression outputs cannot be meter readings
                for (double& v : window.values) v = std::max(0.0, v);
                const StatusSeries st = apply_threshold(window, app.specs[midx(m)]);
                reg_confusions.push_back(
                    confusion(std::span<const std::uint8_t>(st.values),
                              std::span<const std::uint8_t>(app.test_truth[midx(m)][w])));
            }
            const double reg_f1 = f1_per_series(reg_confusions);

            // intrinsic errors: test-span floor and train-side analog
            std::vector<std::vector<double>> floor_recon;
            for (const auto& st : app.test_truth[midx(m)]) {
                floor_recon.push_back(reconstruct_binary(st, levels));
            }
            const double intrinsic_test = mean_abs_vs(floor_recon, app.test_power_watts);
            std::vector<std::vector<double>> train_recon;
            for (const auto& st : app.train_truth[midx(m)]) {
                train_recon.push_back(reconstruct_binary(st, levels));
            }
            const double intrinsic_train = mean_abs_vs(train_recon, app.train_power_watts);

            json cell;
            cell["appliance"] = app.name;
            cell["method"] = to_string(m);
            cell["model"] = "conv";
            cell["f1"] = f1;
            cell["precision"] = precision(pooled);
            cell["recall"] = recall(pooled);
            cell["auc"] = auc;
            cell["mae_watts"] = reg_mae_watts;
            cell["reconstruction_mae_watts"] = recon_mae;
            cell["thresholded_regression_f1"] = reg_f1;
            cell["intrinsic_error_watts"] = intrinsic_test;
            cell["intrinsic_error_train_watts"] = intrinsic_train;
            cell["p_on"] = levels.p_on;
            cell["p_off"] = levels.p_off;
            cells.push_back(cell);

            json rr;
            rr["appliance"] = app.name;
            rr["method"] = to_string(m);
            rr["p_on"] = levels.p_on;
            rr["p_off"] = levels.p_off;
            rr["intrinsic_error_watts"] = intrinsic_train;
            rr["intrinsic_error_test_watts"] = intrinsic_test;
            recon_records.push_back(rr);

            if (write) {
                std::string csv = "time_index,power_watts,reconstructed_watts\n";
                for (std::size_t w = 0; w < recon.size(); ++w) {
                    const std::size_t base = app.test_origin[w].second;
                    for (std::size_t i = 0; i < recon[w].size(); ++i) {
                        csv += std::to_string(base + i);
                        csv += ',';
                        csv += format_double(app.test_power_watts[w][i]);
                        csv += ',';
                        csv += format_double(recon[w][i]);
                        csv += '\n';
                    }
                }
                write_file(config.out_dir() /
                               ("reconstruction_" + app.name + "_" + to_string(m) + ".csv"),
                           csv);
            }
        }
    }

    report["cells"] = cells;
    if (write) {
        write_json(config.out_dir() / "metrics_report.json", report);
        json recon_report;
        recon_report["config_hash"] = config.hash_hex();
        recon_report["records"] = recon_records;
        write_json(config.out_dir() / "reconstruction_report.json", recon_report);
    }
    return report;
}

// ---- sweep ----------------------------------------------------------------

json run_sweep(const RunConfig& config, bool write) {
    const PreparedData data = prepare_data(config);
    const NormalizationSpec norm = config.normalization();
    const LevelsMode levels_mode = config.levels_mode();
    const ThresholdMethod method = config.threshold_method();
    const std::vector<double> w_list = config.sweep_w_list();
    const int reps = config.sweep_repetitions();
    const double k = config.loss_weights().k;

    struct Row {
        std::string appliance;
        double w;
        std::uint64_t seed;
        double f1;
        double mae_watts;
    };
    std::vector<Row> rows;

    for (const PreparedAppliance& app : data.appliances) {
        if (app.test_samples.empty()) {
            throw InputError("test split is empty; adjust split fractions");
        }
        // train-side levels for the w = 1 reconstruction endpoint
        std::vector<double> train_watts_flat;
        std::vector<std::uint8_t> train_truth_flat;
        for (std::size_t w = 0; w < app.train_power_watts.size(); ++w) {
            train_watts_flat.insert(train_watts_flat.end(), app.train_power_watts[w].begin(),
                                    app.train_power_watts[w].end());
            train_truth_flat.insert(train_truth_flat.end(),
                                    app.train_truth[midx(method)][w].begin(),
                                    app.train_truth[midx(method)][w].end());
        }
        const OnOffLevels levels = compute_levels(train_watts_flat, train_truth_flat, levels_mode);

        for (const double w : w_list) {
            if (w < 0.0 || w > 1.0) throw ConfigError("sweep.w_list entries must be in [0, 1]");
            for (int rep = 0; rep < reps; ++rep) {
                const std::uint64_t rep_seed =
                    Rng::derive(config.seed(), "sweep-rep", static_cast<std::uint64_t>(rep));
                ConvModel model = build_model(config, app.name, rep_seed);
                LossWeights weights{w, k};
                TrainOptions options = train_options(config, app.name, weights, rep_seed);
                train(model, app.train_samples, app.val_samples, options);
                const Predictions preds = predict(model, app.test_samples, config.batch());

                Row row;
                row.appliance = app.name;
                row.w = w;
                row.seed = rep_seed;

                if (w == 0.0) {
                    // classification head untrained: threshold the regression output
                    std::vector<ConfusionCounts> confusions;
                    for (std::size_t i = 0; i < preds.power_norm.size(); ++i) {
                        PowerSeries window;
                        window.sampling = SamplingSpec{config.resample_period_seconds()};
                        window.label = app.name;
                        window.values.resize(preds.power_norm[i].size());
                        for (std::size_t t = 0; t < window.values.size(); ++t) {
                            window.values[t] = std::max(
                                0.0, preds.power_norm[i][t] * norm.reference_power_watts);
                        }
                        const StatusSeries st = apply_threshold(window, app.specs[midx(method)]);
                        confusions.push_back(
                            confusion(std::span<const std::uint8_t>(st.values),
                                      std::span<const std::uint8_t>(app.test_truth[midx(method)][i])));
                    }
                    row.f1 = f1_per_series(confusions);
                } else {
                    std::vector<ConfusionCounts> confusions;
                    for (std::size_t i = 0; i < preds.prob_on.size(); ++i) {
                        confusions.push_back(confusion(
                            std::span<const std::uint8_t>(predicted_status(preds.prob_on[i])),
                            std::span<const std::uint8_t>(app.test_truth[midx(method)][i])));
                    }
                    row.f1 = f1_per_series(confusions);
                }

                if (w == 1.0) {
                    // regression head untrained: reconstruct power from the status head
                    std::vector<std::vector<double>> recon;
                    for (const auto& probs : preds.prob_on) {
                        recon.push_back(reconstruct_binary(predicted_status(probs), levels));
                    }
                    row.mae_watts = mean_abs_vs(recon, app.test_power_watts);
                } else {
                    double abs_sum = 0.0;
                    std::size_t n = 0;
                    for (std::size_t i = 0; i < preds.power_norm.size(); ++i) {
                        for (std::size_t t = 0; t < preds.power_norm[i].size(); ++t) {
                            abs_sum += std::abs(preds.power_norm[i][t] -
                                                app.test_samples[i].power_target[t]);
                            ++n;
                        }
                    }
                    row.mae_watts =
                        norm.reference_power_watts * abs_sum / static_cast<double>(n);
                }
                rows.push_back(std::move(row));
            }
        }
    }

    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.appliance != b.appliance) return a.appliance < b.appliance;
        if (a.w != b.w) return a.w < b.w;
        return a.seed < b.seed;
    });

    json report;
    report["config_hash"] = config.hash_hex();
    json out_rows = json::array();
    std::string csv = "appliance,w,seed,f1,mae_watts\n";
    for (const Row& row : rows) {
        json r;
        r["appliance"] = row.appliance;
        r["w"] = row.w;
        r["seed"] = row.seed;
        r["f1"] = row.f1;
        r["mae_watts"] = row.mae_watts;
        out_rows.push_back(r);
        csv += row.appliance;
        csv += ',';
        csv += format_double(row.w);
        csv += ',';
        csv += std::to_string(row.seed);
        csv += ',';
        csv += format_double(row.f1);
        csv += ',';
        csv += format_double(row.mae_watts);
        csv += '\n';
    }
    report["rows"] = out_rows;
    if (write) {
        ensure_dir(config.out_dir());
        write_file(config.out_dir() / "sweep.csv", csv);
        write_json(config.out_dir() / "sweep_report.json", report);
    }
    return report;
}

}  // namespace nilm
