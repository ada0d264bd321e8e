#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nilmlab/config.hpp"
#include "nilmlab/errors.hpp"
#include "nilmlab/ingest.hpp"
#include "nilmlab/metrics.hpp"
#include "nilmlab/model.hpp"
#include "nilmlab/pipeline.hpp"
#include "nilmlab/reconstruction.hpp"
#include "nilmlab/series.hpp"
#include "nilmlab/synth.hpp"
#include "nilmlab/threshold.hpp"

namespace py = pybind11;
using namespace nilm;

namespace {

PowerSeries make_power_series(std::vector<double> values, int period_seconds, std::string label) {
    PowerSeries s;
    s.values = std::move(values);
    s.sampling.period_seconds = period_seconds;
    s.label = std::move(label);
    return s;
}

StatusSeries make_status_series(std::vector<int> values, int period_seconds) {
    StatusSeries s;
    s.sampling.period_seconds = period_seconds;
    s.values.reserve(values.size());
    for (const int v : values) s.values.push_back(v ? 1 : 0);
    return s;
}

std::vector<int> status_values(const StatusSeries& s) {
    return {s.values.begin(), s.values.end()};
}

std::vector<std::uint8_t> to_u8(const std::vector<int>& values) {
    std::vector<std::uint8_t> out;
    out.reserve(values.size());
    for (const int v : values) out.push_back(v ? 1 : 0);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Power-meter thresholding, reconstruction scoring and a small "
              "dual-head convolutional disaggregator";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<InputError>(m, "InputError");
    py::register_exception<NumericalError>(m, "NumericalError");

    // ---- series ----
    py::class_<SamplingSpec>(m, "SamplingSpec")
        .def(py::init<>())
        .def(py::init([](int period) { return SamplingSpec{period}; }), py::arg("period_seconds"))
        .def_readwrite("period_seconds", &SamplingSpec::period_seconds);

    py::class_<PowerSeries>(m, "PowerSeries")
        .def(py::init(&make_power_series), py::arg("values"), py::arg("period_seconds") = 60,
             py::arg("label") = "")
        .def_readwrite("values", &PowerSeries::values)
        .def_property(
            "period_seconds", [](const PowerSeries& s) { return s.sampling.period_seconds; },
            [](PowerSeries& s, int p) { s.sampling.period_seconds = p; })
        .def_readwrite("label", &PowerSeries::label)
        .def("__len__", &PowerSeries::size);

    py::class_<StatusSeries>(m, "StatusSeries")
        .def(py::init(&make_status_series), py::arg("values"), py::arg("period_seconds") = 60)
        .def_property_readonly("values", &status_values)
        .def_property(
            "period_seconds", [](const StatusSeries& s) { return s.sampling.period_seconds; },
            [](StatusSeries& s, int p) { s.sampling.period_seconds = p; })
        .def("__len__", &StatusSeries::size);

    py::enum_<PairKind>(m, "PairKind")
        .value("Regression", PairKind::Regression)
        .value("Classification", PairKind::Classification);

    py::class_<WindowPair>(m, "WindowPair")
        .def(py::init<>())
        .def_readwrite("input", &WindowPair::input)
        .def_readwrite("target", &WindowPair::target)
        .def_readwrite("kind", &WindowPair::kind)
        .def_readwrite("window_mean_watts", &WindowPair::window_mean_watts)
        .def_readonly_static("INPUT_LENGTH", &WindowPair::kInputLength)
        .def_readonly_static("OUTPUT_LENGTH", &WindowPair::kOutputLength);

    m.def("resample_mean", &resample_mean, py::arg("series"), py::arg("target"));
    m.def(
        "resample_mean",
        [](const PowerSeries& series, int period) {
            return resample_mean(series, SamplingSpec{period});
        },
        py::arg("series"), py::arg("period_seconds"));
    m.def("windowize", &windowize, py::arg("aggregate"), py::arg("appliance"),
          py::arg("stride") = 480);
    m.def("windowize_status", &windowize_status, py::arg("aggregate"), py::arg("status"),
          py::arg("stride") = 480);
    m.def("window_count", &window_count, py::arg("series_length"), py::arg("stride") = 480);

    // ---- ingestion ----
    py::class_<NormalizationSpec>(m, "NormalizationSpec")
        .def(py::init<>())
        .def(py::init([](double ref) { return NormalizationSpec{ref}; }),
             py::arg("reference_power_watts"))
        .def_readwrite("reference_power_watts", &NormalizationSpec::reference_power_watts);

    m.def("normalize_pair", &normalize_pair, py::arg("pair"),
          py::arg("spec") = NormalizationSpec{});
    m.def("denormalize_input", &denormalize_input, py::arg("pair"),
          py::arg("spec") = NormalizationSpec{});

    py::enum_<SplitTag>(m, "SplitTag")
        .value("Train", SplitTag::Train)
        .value("Validation", SplitTag::Validation)
        .value("Test", SplitTag::Test);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<>())
        .def_readwrite("pairs", &Dataset::pairs)
        .def_readwrite("split_tag", &Dataset::split_tag)
        .def_readwrite("appliance", &Dataset::appliance)
        .def("__len__", [](const Dataset& d) { return d.pairs.size(); });

    py::class_<SplitFractions>(m, "SplitFractions")
        .def(py::init<>())
        .def(py::init([](double tr, double va, double te) {
                 return SplitFractions{tr, va, te};
             }),
             py::arg("train"), py::arg("validation"), py::arg("test"))
        .def_readwrite("train", &SplitFractions::train)
        .def_readwrite("validation", &SplitFractions::validation)
        .def_readwrite("test", &SplitFractions::test);

    m.def("chronological_split", &chronological_split, py::arg("pairs_per_building"),
          py::arg("fractions") = SplitFractions{}, py::arg("val_test_building") = 0);
    m.def("random_split", &random_split, py::arg("pairs"), py::arg("fractions") = SplitFractions{},
          py::arg("seed") = 1);
    m.def("activation_fraction", &activation_fraction, py::arg("dataset"));

    py::class_<CsvParseOptions>(m, "CsvParseOptions")
        .def(py::init<>())
        .def_readwrite("aggregate_column", &CsvParseOptions::aggregate_column)
        .def_readwrite("appliance_columns", &CsvParseOptions::appliance_columns)
        .def_readwrite("period_seconds", &CsvParseOptions::period_seconds)
        .def_readwrite("forward_fill_limit", &CsvParseOptions::forward_fill_limit);

    m.def(
        "parse_power_csv",
        [](const std::filesystem::path& path, const CsvParseOptions& options) {
            return parse_power_csv(path, options, nullptr);
        },
        py::arg("path"), py::arg("options"));

    // ---- thresholding ----
    py::enum_<ThresholdMethod>(m, "ThresholdMethod")
        .value("MP", ThresholdMethod::MP)
        .value("VS", ThresholdMethod::VS)
        .value("AT", ThresholdMethod::AT);

    py::class_<ClusterSummary>(m, "ClusterSummary")
        .def(py::init<>())
        .def_readwrite("m0", &ClusterSummary::m0)
        .def_readwrite("m1", &ClusterSummary::m1)
        .def_readwrite("sigma0", &ClusterSummary::sigma0)
        .def_readwrite("sigma1", &ClusterSummary::sigma1)
        .def_readwrite("n0", &ClusterSummary::n0)
        .def_readwrite("n1", &ClusterSummary::n1);

    py::class_<ThresholdSpec>(m, "ThresholdSpec")
        .def(py::init<>())
        .def_readwrite("method", &ThresholdSpec::method)
        .def_readwrite("lambda_watts", &ThresholdSpec::lambda_watts)
        .def_readwrite("mu_off_seconds", &ThresholdSpec::mu_off_seconds)
        .def_readwrite("mu_on_seconds", &ThresholdSpec::mu_on_seconds)
        .def_readwrite("clusters", &ThresholdSpec::clusters);

    m.def("kmeans_1d_two",
          [](const std::vector<double>& values) { return kmeans_1d_two(values); },
          py::arg("values"));
    m.def("threshold_mp", &threshold_mp, py::arg("summary"));
    m.def("threshold_vs", &threshold_vs, py::arg("summary"));
    m.def("apply_power_threshold", &apply_power_threshold, py::arg("power"),
          py::arg("lambda_watts"));
    m.def("duration_filter", &duration_filter, py::arg("status"), py::arg("mu_off_seconds"),
          py::arg("mu_on_seconds"));
    m.def("threshold_at", &threshold_at, py::arg("power"), py::arg("spec"));
    m.def(
        "derive_threshold",
        [](const std::vector<double>& train_values, ThresholdMethod method,
           const std::optional<ThresholdSpec>& at_spec) {
            return derive_threshold(train_values, method, at_spec);
        },
        py::arg("train_values"), py::arg("method"), py::arg("at_spec") = std::nullopt);
    m.def("apply_threshold", &apply_threshold, py::arg("power"), py::arg("spec"));
    m.def("at_defaults_for", &at_defaults_for, py::arg("appliance"));

    // ---- reconstruction ----
    py::enum_<LevelsMode>(m, "LevelsMode")
        .value("Conditional", LevelsMode::Conditional)
        .value("Literal", LevelsMode::Literal);

    py::class_<OnOffLevels>(m, "OnOffLevels")
        .def(py::init<>())
        .def(py::init([](double p_on, double p_off) {
                 OnOffLevels l;
                 l.p_on = p_on;
                 l.p_off = p_off;
                 return l;
             }),
             py::arg("p_on"), py::arg("p_off"))
        .def_readwrite("p_on", &OnOffLevels::p_on)
        .def_readwrite("p_off", &OnOffLevels::p_off)
        .def_readwrite("inverted", &OnOffLevels::inverted);

    m.def(
        "compute_levels",
        [](const std::vector<double>& power, const std::vector<int>& status, LevelsMode mode) {
            return compute_levels(power, to_u8(status), mode);
        },
        py::arg("power"), py::arg("status"), py::arg("mode") = LevelsMode::Conditional);
    m.def(
        "reconstruct_binary",
        [](const std::vector<int>& status, const OnOffLevels& levels) {
            return reconstruct_binary(to_u8(status), levels);
        },
        py::arg("status"), py::arg("levels"));
    m.def(
        "intrinsic_error",
        [](const std::vector<double>& power, const std::vector<int>& status, LevelsMode mode) {
            return intrinsic_error(power, to_u8(status), mode);
        },
        py::arg("power"), py::arg("status"), py::arg("mode") = LevelsMode::Conditional);

    // ---- metrics ----
    py::class_<ConfusionCounts>(m, "ConfusionCounts")
        .def(py::init<>())
        .def(py::init([](double tp, double fp, double fn, double tn) {
                 return ConfusionCounts{tp, fp, fn, tn};
             }),
             py::arg("tp"), py::arg("fp"), py::arg("fn"), py::arg("tn"))
        .def_readwrite("tp", &ConfusionCounts::tp)
        .def_readwrite("fp", &ConfusionCounts::fp)
        .def_readwrite("fn", &ConfusionCounts::fn)
        .def_readwrite("tn", &ConfusionCounts::tn);

    m.def(
        "mae",
        [](const std::vector<double>& pred, const std::vector<double>& truth, double scale) {
            return mae(pred, truth, scale);
        },
        py::arg("pred"), py::arg("truth"), py::arg("scale_watts") = 1.0);
    m.def(
        "predicted_status",
        [](const std::vector<double>& prob) {
            const auto s = predicted_status(prob);
            return std::vector<int>(s.begin(), s.end());
        },
        py::arg("prob"));
    m.def(
        "confusion",
        [](const std::vector<double>& pred, const std::vector<double>& truth) {
            return confusion(std::span<const double>(pred), std::span<const double>(truth));
        },
        py::arg("pred_status"), py::arg("truth_status"));
    m.def("f1_score", &f1_score, py::arg("counts"));
    m.def(
        "f1_per_series",
        [](const std::vector<ConfusionCounts>& series) { return f1_per_series(series); },
        py::arg("series_confusions"));
    m.def("precision", &precision, py::arg("counts"));
    m.def("recall", &recall, py::arg("counts"));
    m.def(
        "roc_auc",
        [](const std::vector<double>& scores, const std::vector<int>& truth) {
            return roc_auc(scores, to_u8(truth));
        },
        py::arg("scores"), py::arg("truth"));

    // ---- synth ----
    py::enum_<ProfileKind>(m, "ProfileKind")
        .value("PeriodicRect", ProfileKind::PeriodicRect)
        .value("TwoPeakCycle", ProfileKind::TwoPeakCycle)
        .value("BurstCycle", ProfileKind::BurstCycle);

    py::class_<ApplianceProfile>(m, "ApplianceProfile")
        .def(py::init<>())
        .def_readwrite("name", &ApplianceProfile::name)
        .def_readwrite("kind", &ApplianceProfile::kind)
        .def_readwrite("on_watts", &ApplianceProfile::on_watts)
        .def_readwrite("period_seconds", &ApplianceProfile::period_seconds)
        .def_readwrite("on_duration_seconds", &ApplianceProfile::on_duration_seconds)
        .def_readwrite("jitter", &ApplianceProfile::jitter)
        .def_readwrite("noise_sd_watts", &ApplianceProfile::noise_sd_watts);

    py::class_<SynthAppliance>(m, "SynthAppliance")
        .def_readonly("power", &SynthAppliance::power)
        .def_readonly("truth", &SynthAppliance::truth);

    py::class_<SynthHousehold>(m, "SynthHousehold")
        .def_readonly("aggregate", &SynthHousehold::aggregate)
        .def_readonly("appliances", &SynthHousehold::appliances)
        .def_readonly("residual", &SynthHousehold::residual);

    m.def(
        "generate_appliance",
        [](const ApplianceProfile& profile, std::size_t length, int period_seconds,
           std::uint64_t seed) {
            return generate_appliance(profile, length, SamplingSpec{period_seconds}, seed);
        },
        py::arg("profile"), py::arg("length"), py::arg("period_seconds") = 60, py::arg("seed") = 1);
    m.def(
        "generate_household",
        [](const std::vector<ApplianceProfile>& profiles, double residual_sd, std::size_t length,
           int period_seconds, std::uint64_t seed) {
            return generate_household(profiles, residual_sd, length, SamplingSpec{period_seconds},
                                      seed);
        },
        py::arg("profiles"), py::arg("residual_sd"), py::arg("length"),
        py::arg("period_seconds") = 60, py::arg("seed") = 1);

    // ---- model ----
    py::class_<LossWeights>(m, "LossWeights")
        .def(py::init<>())
        .def(py::init([](double w, double k) { return LossWeights{w, k}; }), py::arg("w"),
             py::arg("k") = 0.0066)
        .def_readwrite("w", &LossWeights::w)
        .def_readwrite("k", &LossWeights::k);

    py::enum_<Mode>(m, "Mode").value("Train", Mode::Train).value("Eval", Mode::Eval);

    py::class_<ConvModelConfig>(m, "ConvModelConfig")
        .def(py::init<>())
        .def(py::init([](double width_scale, std::uint64_t seed) {
                 return ConvModelConfig{width_scale, seed};
             }),
             py::arg("width_scale") = 0.25, py::arg("init_seed") = 1)
        .def_readwrite("width_scale", &ConvModelConfig::width_scale)
        .def_readwrite("init_seed", &ConvModelConfig::init_seed);

    py::class_<ArchDescription>(m, "ArchDescription")
        .def_readonly("encoder_channels", &ArchDescription::encoder_channels)
        .def_readonly("encoder_lengths", &ArchDescription::encoder_lengths)
        .def_readonly("pool_kernels", &ArchDescription::pool_kernels)
        .def_readonly("pooled_lengths", &ArchDescription::pooled_lengths)
        .def_readonly("branch_channels", &ArchDescription::branch_channels)
        .def_readonly("concat_channels", &ArchDescription::concat_channels)
        .def_readonly("decoder_channels", &ArchDescription::decoder_channels)
        .def_readonly("input_length", &ArchDescription::input_length)
        .def_readonly("output_length", &ArchDescription::output_length);

    py::class_<Sample>(m, "Sample")
        .def(py::init<>())
        .def(py::init([](std::vector<double> input, std::vector<double> power_target,
                         std::vector<double> status_target) {
                 Sample s;
                 s.input = std::move(input);
                 s.power_target = std::move(power_target);
                 s.status_target = std::move(status_target);
                 return s;
             }),
             py::arg("input"), py::arg("power_target"), py::arg("status_target"))
        .def_readwrite("input", &Sample::input)
        .def_readwrite("power_target", &Sample::power_target)
        .def_readwrite("status_target", &Sample::status_target);

    py::class_<TrainOptions>(m, "TrainOptions")
        .def(py::init<>())
        .def_readwrite("epochs", &TrainOptions::epochs)
        .def_readwrite("batch", &TrainOptions::batch)
        .def_readwrite("lr", &TrainOptions::lr)
        .def_readwrite("weights", &TrainOptions::weights)
        .def_readwrite("seed", &TrainOptions::seed)
        .def_readwrite("denorm_scale_watts", &TrainOptions::denorm_scale_watts);

    py::class_<EpochStats>(m, "EpochStats")
        .def_readonly("epoch", &EpochStats::epoch)
        .def_readonly("train_loss", &EpochStats::train_loss)
        .def_readonly("val_loss", &EpochStats::val_loss)
        .def_readonly("val_f1", &EpochStats::val_f1)
        .def_readonly("val_mae_watts", &EpochStats::val_mae_watts);

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("history", &TrainResult::history)
        .def_readonly("best_epoch", &TrainResult::best_epoch)
        .def_readonly("best_val_loss", &TrainResult::best_val_loss);

    py::class_<Predictions>(m, "Predictions")
        .def_readonly("prob_on", &Predictions::prob_on)
        .def_readonly("power_norm", &Predictions::power_norm);

    py::class_<ConvModel>(m, "ConvModel")
        .def_static("build", &ConvModel::build, py::arg("config"))
        .def_property_readonly("architecture", &ConvModel::architecture)
        .def_property_readonly("step_count", &ConvModel::step_count)
        .def(
            "forward",
            [](ConvModel& model, const std::vector<double>& input, Mode mode) {
                Tensor x(1, 1, static_cast<int>(input.size()));
                std::copy(input.begin(), input.end(), x.row(0, 0));
                const ConvModel::Output out = model.forward(x, mode);
                std::vector<std::vector<double>> probs(2);
                for (int c = 0; c < 2; ++c) {
                    probs[c].assign(out.status_probs.row(0, c),
                                    out.status_probs.row(0, c) + out.status_probs.length);
                }
                std::vector<double> power(out.power.row(0, 0),
                                          out.power.row(0, 0) + out.power.length);
                return py::make_tuple(probs, power);
            },
            py::arg("input"), py::arg("mode") = Mode::Eval)
        .def("save", &ConvModel::save, py::arg("path"))
        .def_static("load", &ConvModel::load, py::arg("path"));

    m.def("train", &train, py::arg("model"), py::arg("train_set"), py::arg("val_set"),
          py::arg("options"));
    m.def("predict", &predict, py::arg("model"), py::arg("samples"), py::arg("batch_size") = 32);
    m.def(
        "loss_regression",
        [](const std::vector<double>& pred, const std::vector<double>& target) {
            Tensor p(1, 1, static_cast<int>(pred.size())), t(1, 1, static_cast<int>(target.size()));
            std::copy(pred.begin(), pred.end(), p.row(0, 0));
            std::copy(target.begin(), target.end(), t.row(0, 0));
            return loss_regression(p, t);
        },
        py::arg("pred_power"), py::arg("target_power"));
    m.def(
        "loss_classification",
        [](const std::vector<double>& pred, const std::vector<double>& target) {
            Tensor p(1, 1, static_cast<int>(pred.size())), t(1, 1, static_cast<int>(target.size()));
            std::copy(pred.begin(), pred.end(), p.row(0, 0));
            std::copy(target.begin(), target.end(), t.row(0, 0));
            return loss_classification(p, t);
        },
        py::arg("pred_prob_on"), py::arg("target_status"));
    m.def("loss_total", &loss_total, py::arg("class_loss"), py::arg("reg_loss"),
          py::arg("weights"));

    // ---- pipeline ----
    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_static("from_file", &RunConfig::from_file, py::arg("path"))
        .def("set", &RunConfig::set, py::arg("key"), py::arg("value"))
        .def("get", &RunConfig::get, py::arg("key"))
        .def("canonical_text", &RunConfig::canonical_text)
        .def("hash_hex", &RunConfig::hash_hex);

    auto run_json = [](nlohmann::json (*fn)(const RunConfig&, bool)) {
        return [fn](const RunConfig& config, bool write) { return fn(config, write).dump(); };
    };
    m.def("run_synth_json", run_json(&run_synth), py::arg("config"), py::arg("write") = true);
    m.def("run_threshold_json", run_json(&run_threshold), py::arg("config"),
          py::arg("write") = true);
    m.def("run_train_json", run_json(&run_train), py::arg("config"), py::arg("write") = true);
    m.def("run_evaluate_json", run_json(&run_evaluate), py::arg("config"), py::arg("write") = true);
    m.def("run_sweep_json", run_json(&run_sweep), py::arg("config"), py::arg("write") = true);
}
