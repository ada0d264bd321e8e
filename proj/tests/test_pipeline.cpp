#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "nilmlab/config.hpp"
#include "nilmlab/errors.hpp"
#include "nilmlab/pipeline.hpp"
#include "schema_check.hpp"

using namespace nilm;
namespace fs = std::filesystem;

#ifndef NILMLAB_SOURCE_DIR
#define NILMLAB_SOURCE_DIR "."
#endif

namespace {

const std::string kSchemas = std::string(NILMLAB_SOURCE_DIR) + "/schemas/";

RunConfig mini_config(const std::string& out_name) {
    RunConfig config;
    config.set("out.dir", (fs::temp_directory_path() / out_name).string());
    config.set("seed", "11");
    config.set("synth.days", "7");
    config.set("synth.residual_sd", "0");
    // clean fixture: noiseless fridge plus one sparse high-power appliance
    config.set("synth.appliances",
               "fridge:periodic_rect:100:1800:720:0:0,washer:burst:1900:21600:3600:0:0");
    config.set("data.truth_csv", (fs::temp_directory_path() / out_name / "synth_truth.csv").string());
    config.set("model.width_scale", "0.125");
    config.set("train.epochs", "1");
    config.set("train.batch", "8");
    config.set("sweep.w_list", "0,1");
    config.set("sweep.repetitions", "1");
    return config;
}

std::string slurp(const fs::path& path) {
    std::ifstream file(path, std::ios::binary);
    REQUIRE(file);
    return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config defaults carry the standard constants") {
    RunConfig config;
    CHECK(config.normalization().reference_power_watts == 2000.0);
    CHECK(config.default_stride() == 480);  // 510 - 30 overlap
    CHECK(config.resample_period_seconds() == 60);
    CHECK(config.split_fractions().train == 0.8);
    CHECK(config.epochs() == 50);
    CHECK(config.batch() == 32);
    CHECK(config.learning_rate() == 1e-4);
    CHECK(config.loss_weights().k == 0.0066);
    CHECK(config.sweep_w_list().size() == 11);
    CHECK(config.sweep_repetitions() == 5);
}

TEST_CASE("config rejects unknown keys but accepts the AT family") {
    RunConfig config;
    CHECK_THROWS_AS(config.set("train.epoch", "3"), ConfigError);
    CHECK_THROWS_AS(config.set_pair("no-equals-sign"), ConfigError);
    config.set("threshold.at.heatpump.lambda_watts", "75");
    config.set("threshold.at.heatpump.mu_off_seconds", "10");
    config.set("threshold.at.heatpump.mu_on_seconds", "20");
    const ThresholdSpec spec = config.at_spec_for("heatpump");
    CHECK(spec.lambda_watts == 75.0);
    CHECK(spec.mu_off_seconds == 10.0);
    CHECK(spec.mu_on_seconds == 20.0);
    CHECK_THROWS_AS(config.at_spec_for("unknown_gadget"), ConfigError);
    // built-in defaults can be partially overridden
    config.set("threshold.at.fridge.lambda_watts", "60");
    const ThresholdSpec fridge = config.at_spec_for("fridge");
    CHECK(fridge.lambda_watts == 60.0);
    CHECK(fridge.mu_on_seconds == 1.0);
}

TEST_CASE("config files parse with comments and overrides") {
    const fs::path path = fs::temp_directory_path() / "nilm_config_test.conf";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "seed = 99\n";
        out << "train.epochs = 7   # trailing comment\n";
        out << "\n";
    }
    RunConfig config = RunConfig::from_file(path);
    CHECK(config.seed() == 99);
    CHECK(config.epochs() == 7);
    config.set_pair("train.epochs=9");
    CHECK(config.epochs() == 9);
}

TEST_CASE("config hash tracks content, not insertion order") {
    RunConfig a, b;
    a.set("seed", "5");
    a.set("train.epochs", "3");
    b.set("train.epochs", "3");
    b.set("seed", "5");
    CHECK(a.hash_hex() == b.hash_hex());
    b.set("seed", "6");
    CHECK(a.hash_hex() != b.hash_hex());
    CHECK(a.hash_hex().size() == 16);
}

TEST_CASE("config validation errors") {
    RunConfig config;
    config.set("model.width_scale", "0");
    CHECK_THROWS_AS(config.width_scale(), ConfigError);
    config.set("loss.w", "1.5");
    CHECK_THROWS_AS(config.loss_weights(), ConfigError);
    config.set("split.mode", "sideways");
    CHECK_THROWS_AS(config.split_mode(), ConfigError);
    config.set("synth.appliances", "fridge:periodic_rect:100");
    CHECK_THROWS_AS(config.synth_profiles(), ConfigError);
}

TEST_CASE("pipeline end to end on a small noiseless fixture") {
    RunConfig config = mini_config("nilm_pipe_test");

    const nlohmann::json synth = run_synth(config);
    nilm_test::check_against_schema_file(synth, kSchemas + "synth_report.schema.json");
    CHECK(fs::exists(config.out_dir() / "synth_household.csv"));
    CHECK(fs::exists(config.out_dir() / "synth_truth.csv"));

    const nlohmann::json threshold = run_threshold(config);
    nilm_test::check_against_schema_file(threshold, kSchemas + "threshold_report.schema.json");
    CHECK(threshold["records"].size() == 6);  // 2 appliances x 3 methods
    bool saw_fridge_mp = false;
    for (const auto& rec : threshold["records"]) {
        if (rec["appliance"] == "fridge" && rec["method"] == "mp") {
            saw_fridge_mp = true;
            // noiseless rectangle: centroids 0 and 100, midpoint 50
            CHECK(rec["lambda_watts"].get<double>() == 50.0);
            CHECK(rec["f1_vs_truth"].get<double>() == 1.0);
        }
        if (rec["appliance"] == "fridge" && rec["method"] == "at") {
            CHECK(rec["lambda_watts"].get<double>() == 50.0);  // built-in default
        }
    }
    CHECK(saw_fridge_mp);
    CHECK(fs::exists(config.out_dir() / "threshold_overlay_fridge.csv"));

    const nlohmann::json train_report = run_train(config);
    nilm_test::check_against_schema_file(train_report, kSchemas + "train_report.schema.json");
    CHECK(fs::exists(config.out_dir() / "model_fridge.ckpt"));
    CHECK(fs::exists(config.out_dir() / "history_fridge.csv"));

    const nlohmann::json metrics = run_evaluate(config);
    nilm_test::check_against_schema_file(metrics, kSchemas + "metrics_report.schema.json");
    CHECK(metrics["cells"].size() == 6);  // every (appliance x method) cell
    for (const auto& cell : metrics["cells"]) {
        CHECK(cell["intrinsic_error_watts"].get<double>() >= 0.0);
        // noiseless binary fixture reconstructs exactly from true statuses
        if (cell["method"] == "mp" && cell["appliance"] == "fridge") {
            CHECK(cell["intrinsic_error_watts"].get<double>() ==
                  doctest::Approx(0.0).epsilon(1e-9));
        }
    }
    CHECK(fs::exists(config.out_dir() / "reconstruction_fridge_mp.csv"));
    CHECK(fs::exists(config.out_dir() / "reconstruction_report.json"));

    const nlohmann::json recon = nlohmann::json::parse(
        slurp(config.out_dir() / "reconstruction_report.json"));
    nilm_test::check_against_schema_file(recon, kSchemas + "reconstruction_report.schema.json");
}

TEST_CASE("subcommand reruns are byte-identical") {
    RunConfig config = mini_config("nilm_pipe_det_a");
    run_synth(config);
    const std::string household_a = slurp(config.out_dir() / "synth_household.csv");
    const std::string threshold_a = run_threshold(config).dump();

    run_synth(config);
    CHECK(slurp(config.out_dir() / "synth_household.csv") == household_a);
    CHECK(run_threshold(config).dump() == threshold_a);
}

TEST_CASE("sweep emits one row per (appliance, w, repetition)") {
    RunConfig config = mini_config("nilm_pipe_sweep");
    config.set("train.epochs", "1");
    run_synth(config);
    const nlohmann::json sweep = run_sweep(config);
    nilm_test::check_against_schema_file(sweep, kSchemas + "sweep_report.schema.json");
    CHECK(sweep["rows"].size() == 2 * 2 * 1);  // appliances x |w_list| x reps
    const std::string csv = slurp(config.out_dir() / "sweep.csv");
    CHECK(csv.rfind("appliance,w,seed,f1,mae_watts\n", 0) == 0);
    // rows sorted by (appliance, w, seed)
    CHECK(sweep["rows"][0]["appliance"] == "fridge");
    CHECK(sweep["rows"][0]["w"].get<double>() == 0.0);
    CHECK(sweep["rows"][1]["w"].get<double>() == 1.0);
}

TEST_CASE("missing data file raises an input error") {
    RunConfig config;
    config.set("data.csv", "/nonexistent/file.csv");
    CHECK_THROWS_AS(run_threshold(config, false), InputError);
}

TEST_CASE("native-resolution thresholding clusters at the source period") {
    RunConfig config = mini_config("nilm_pipe_native");
    config.set("data.period_seconds", "6");
    config.set("synth.days", "1.4");  // 20160 samples at 6 s -> 2016 at 60 s
    config.set("synth.appliances", "dishwasher:two_peak:2200:14400:2700:0:0");
    config.set("data.truth_csv", "");
    config.set("threshold.resolution", "native");
    run_synth(config);
    const nlohmann::json report = run_threshold(config);
    nilm_test::check_against_schema_file(report, kSchemas + "threshold_report.schema.json");
    for (const auto& rec : report["records"]) {
        if (rec["method"] == "mp") {
            // clean two-peak template clusters between the low plateau and peak
            CHECK(rec["lambda_watts"].get<double>() > 0.12 * 2200.0);
            CHECK(rec["lambda_watts"].get<double>() < 2200.0);
        }
    }
}
