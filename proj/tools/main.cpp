#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nilmlab/config.hpp"
#include "nilmlab/errors.hpp"
#include "nilmlab/pipeline.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Path to a key = value config file");
    cmd->add_option("--out", args.out_dir, "Output directory (overrides out.dir)");
    cmd->add_option("--seed", args.seed, "Top-level seed (overrides seed)");
    cmd->add_option("--set", args.overrides, "Override a config key, e.g. --set train.epochs=10")
        ->take_all();
}

nilm::RunConfig resolve(const CommonArgs& args) {
    nilm::RunConfig config =
        args.config_path.empty() ? nilm::RunConfig() : nilm::RunConfig::from_file(args.config_path);
    if (!args.out_dir.empty()) config.set("out.dir", args.out_dir);
    if (args.seed >= 0) config.set("seed", std::to_string(args.seed));
    for (const std::string& pair : args.overrides) config.set_pair(pair);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NILM thresholding and disaggregation pipeline"};
    app.require_subcommand(1);

    CommonArgs synth_args, threshold_args, train_args, evaluate_args, sweep_args;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic household CSV");
    add_common(synth, synth_args);
    CLI::App* threshold =
        app.add_subcommand("threshold", "Derive MP/VS/AT thresholds and status overlays");
    add_common(threshold, threshold_args);
    CLI::App* train = app.add_subcommand("train", "Train one model per appliance");
    add_common(train, train_args);
    CLI::App* evaluate =
        app.add_subcommand("evaluate", "Score trained models and reconstructions");
    add_common(evaluate, evaluate_args);
    CLI::App* sweep = app.add_subcommand("sweep", "Train across classification weights");
    add_common(sweep, sweep_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;  // bad arguments are configuration errors
    }

    try {
        if (synth->parsed()) {
            nilm::run_synth(resolve(synth_args));
        } else if (threshold->parsed()) {
            nilm::run_threshold(resolve(threshold_args));
        } else if (train->parsed()) {
            nilm::run_train(resolve(train_args));
        } else if (evaluate->parsed()) {
            nilm::run_evaluate(resolve(evaluate_args));
        } else if (sweep->parsed()) {
            nilm::run_sweep(resolve(sweep_args));
        }
    } catch (const nilm::ConfigError& err) {
        std::fprintf(stderr, "configuration error: %s\n", err.what());
        return 2;
    } catch (const nilm::InputError& err) {
        std::fprintf(stderr, "input error: %s\n", err.what());
        return 3;
    } catch (const nilm::NumericalError& err) {
        std::fprintf(stderr, "numerical error: %s\n", err.what());
        return 4;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
    return 0;
}
