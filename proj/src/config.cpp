#include "nilmlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <regex>
#include <sstream>

#include "nilmlab/errors.hpp"
#include "nilmlab/rng.hpp"

namespace nilm {

namespace {

const std::map<std::string, std::string>& default_values() {
    static const std::map<std::string, std::string> defaults = {
        {"seed", "1"},
        {"out.dir", "out"},
        {"data.csv", ""},  // empty: <out.dir>/synth_household.csv
        {"data.truth_csv", ""},
        {"data.period_seconds", "60"},
        {"data.aggregate_column", "aggregate"},
        {"data.appliance_columns", ""},  // empty: every column but time/aggregate
        {"data.fill_limit", "5"},
        {"resample.period_seconds", "60"},
        {"window.overlap", "30"},
        {"window.train_stride", "0"},  // 0: same as the default stride
        {"normalize.reference_watts", "2000"},
        {"split.mode", "chronological"},
        {"split.train", "0.8"},
        {"split.val", "0.1"},
        {"split.test", "0.1"},
        {"split.val_test_building", "0"},
        {"threshold.method", "mp"},
        {"threshold.resolution", "resampled"},
        {"threshold.levels", "conditional"},
        {"model.width_scale", "0.25"},
        {"train.epochs", "50"},
        {"train.batch", "32"},
        {"train.lr", "1e-4"},
        {"loss.w", "0.5"},
        {"loss.k", "0.0066"},
        {"sweep.w_list", "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1"},
        {"sweep.repetitions", "5"},
        {"synth.days", "14"},
        {"synth.residual_sd", "30"},
        {"synth.appliances",
         "fridge:periodic_rect:100:1800:720:0.1:4,"
         "dishwasher:two_peak:2200:36000:5400:0.15:10,"
         "washer:burst:1900:30600:3600:0.15:10"},
        {"evaluate.checkpoint_dir", ""},
    };
    return defaults;
}

bool is_at_key(const std::string& key) {
    static const std::regex pattern(
        R"(threshold\.at\.[^.]+\.(lambda_watts|mu_off_seconds|mu_on_seconds))");
    return std::regex_match(key, pattern);
}

std::string trim(const std::string& s) {
    const std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError("key '" + key + "': cannot parse number '" + text + "'");
    }
    return value;
}

long long parse_int(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError("key '" + key + "': cannot parse integer '" + text + "'");
    }
    return value;
}

}  // namespace

RunConfig::RunConfig() : values_(default_values()) {}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open config file '" + path.string() + "'");
    RunConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        config.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return config;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (default_values().count(key) == 0 && !is_at_key(key)) {
        throw ConfigError("unknown config key '" + key + "'");
    }
    values_[key] = value;
}

void RunConfig::set_pair(const std::string& pair) {
    const std::size_t eq = pair.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("--set expects key=value, got '" + pair + "'");
    }
    set(trim(pair.substr(0, eq)), trim(pair.substr(eq + 1)));
}

const std::string& RunConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
    return it->second;
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string RunConfig::canonical_text() const {
    std::string out;
    for (const auto& [key, value] : values_) {  // std::map iterates sorted
        if (key == "out.dir") continue;  // where results land does not change them
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    }
    return out;
}

std::string RunConfig::hash_hex() const {
    const std::uint64_t h = Rng::fnv1a(canonical_text());
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 0; i < 16; ++i) buf[i] = digits[(h >> (60 - 4 * i)) & 0xF];
    buf[16] = '\0';
    return buf;
}

double RunConfig::get_double(const std::string& key) const { return parse_double(key, get(key)); }

int RunConfig::get_int(const std::string& key) const {
    return static_cast<int>(parse_int(key, get(key)));
}

std::uint64_t RunConfig::seed() const {
    return static_cast<std::uint64_t>(parse_int("seed", get("seed")));
}

std::filesystem::path RunConfig::out_dir() const { return get("out.dir"); }

std::vector<std::string> RunConfig::data_csv() const {
    const std::string value = get("data.csv");
    if (trim(value).empty()) {
        return {(out_dir() / "synth_household.csv").string()};
    }
    return split_list(value, ',');
}

std::string RunConfig::truth_csv() const { return trim(get("data.truth_csv")); }

int RunConfig::data_period_seconds() const {
    const int p = get_int("data.period_seconds");
    if (p < 1) throw ConfigError("data.period_seconds must be >= 1");
    return p;
}

std::string RunConfig::aggregate_column() const { return get("data.aggregate_column"); }

std::vector<std::string> RunConfig::appliance_columns() const {
    return split_list(get("data.appliance_columns"), ',');
}

int RunConfig::fill_limit() const { return get_int("data.fill_limit"); }

int RunConfig::resample_period_seconds() const {
    const int p = get_int("resample.period_seconds");
    if (p < 1) throw ConfigError("resample.period_seconds must be >= 1");
    return p;
}

int RunConfig::window_overlap() const { return get_int("window.overlap"); }

int RunConfig::default_stride() const {
    const int stride = WindowPair::kInputLength - window_overlap();
    if (stride < 1) throw ConfigError("window.overlap leaves a nonpositive stride");
    return stride;
}

int RunConfig::train_stride() const {
    const int s = get_int("window.train_stride");
    if (s < 0) throw ConfigError("window.train_stride must be >= 0");
    return s == 0 ? default_stride() : s;
}

NormalizationSpec RunConfig::normalization() const {
    NormalizationSpec spec;
    spec.reference_power_watts = get_double("normalize.reference_watts");
    if (spec.reference_power_watts <= 0) {
        throw ConfigError("normalize.reference_watts must be positive");
    }
    return spec;
}

std::string RunConfig::split_mode() const {
    const std::string mode = get("split.mode");
    if (mode != "chronological" && mode != "random") {
        throw ConfigError("split.mode must be 'chronological' or 'random'");
    }
    return mode;
}

SplitFractions RunConfig::split_fractions() const {
    SplitFractions f;
    f.train = get_double("split.train");
    f.validation = get_double("split.val");
    f.test = get_double("split.test");
    return f;
}

std::size_t RunConfig::val_test_building() const {
    const int b = get_int("split.val_test_building");
    if (b < 0) throw ConfigError("split.val_test_building must be >= 0");
    return static_cast<std::size_t>(b);
}

ThresholdMethod RunConfig::threshold_method() const {
    return threshold_method_from_string(get("threshold.method"));
}

std::string RunConfig::threshold_resolution() const {
    const std::string r = get("threshold.resolution");
    if (r != "resampled" && r != "native") {
        throw ConfigError("threshold.resolution must be 'resampled' or 'native'");
    }
    return r;
}

LevelsMode RunConfig::levels_mode() const {
    const std::string m = get("threshold.levels");
    if (m == "conditional") return LevelsMode::Conditional;
    if (m == "literal") return LevelsMode::Literal;
    throw ConfigError("threshold.levels must be 'conditional' or 'literal'");
}

ThresholdSpec RunConfig::at_spec_for(const std::string& appliance) const {
    std::optional<ThresholdSpec> spec = at_defaults_for(appliance);
    const std::string stem = "threshold.at." + appliance + ".";
    const bool has_any = has(stem + "lambda_watts") || has(stem + "mu_off_seconds") ||
                         has(stem + "mu_on_seconds");
    if (!spec && !has(stem + "lambda_watts")) {
        throw ConfigError("appliance '" + appliance + "' has no built-in AT parameters; set '" +
                          stem + "lambda_watts' (and mu_off_seconds/mu_on_seconds)");
    }
    ThresholdSpec out = spec.value_or(ThresholdSpec{});
    out.method = ThresholdMethod::AT;
    if (has_any) {
        if (has(stem + "lambda_watts")) out.lambda_watts = get_double(stem + "lambda_watts");
        if (has(stem + "mu_off_seconds")) out.mu_off_seconds = get_double(stem + "mu_off_seconds");
        if (has(stem + "mu_on_seconds")) out.mu_on_seconds = get_double(stem + "mu_on_seconds");
    }
    if (out.lambda_watts < 0 || out.mu_off_seconds < 0 || out.mu_on_seconds < 0) {
        throw ConfigError("AT parameters for '" + appliance + "' must be nonnegative");
    }
    return out;
}

double RunConfig::width_scale() const {
    const double w = get_double("model.width_scale");
    if (w <= 0.0 || w > 1.0) throw ConfigError("model.width_scale must be in (0, 1]");
    return w;
}

int RunConfig::epochs() const {
    const int e = get_int("train.epochs");
    if (e < 0) throw ConfigError("train.epochs must be >= 0");
    return e;
}

int RunConfig::batch() const {
    const int b = get_int("train.batch");
    if (b < 1) throw ConfigError("train.batch must be >= 1");
    return b;
}

double RunConfig::learning_rate() const {
    const double lr = get_double("train.lr");
    if (lr <= 0) throw ConfigError("train.lr must be positive");
    return lr;
}

LossWeights RunConfig::loss_weights() const {
    LossWeights w;
    w.w = get_double("loss.w");
    w.k = get_double("loss.k");
    if (w.w < 0 || w.w > 1) throw ConfigError("loss.w must be in [0, 1]");
    if (w.k <= 0) throw ConfigError("loss.k must be positive");
    return w;
}

std::vector<double> RunConfig::sweep_w_list() const {
    std::vector<double> out;
    for (const std::string& item : split_list(get("sweep.w_list"), ',')) {
        out.push_back(parse_double("sweep.w_list", item));
    }
    if (out.empty()) throw ConfigError("sweep.w_list is empty");
    return out;
}

int RunConfig::sweep_repetitions() const {
    const int r = get_int("sweep.repetitions");
    if (r < 1) throw ConfigError("sweep.repetitions must be >= 1");
    return r;
}

double RunConfig::synth_days() const {
    const double d = get_double("synth.days");
    if (d <= 0) throw ConfigError("synth.days must be positive");
    return d;
}

double RunConfig::synth_residual_sd() const { return get_double("synth.residual_sd"); }

std::vector<ApplianceProfile> RunConfig::synth_profiles() const {
    // name:kind:on_watts:period_s:on_duration_s[:jitter[:noise_sd]]
    std::vector<ApplianceProfile> out;
    for (const std::string& item : split_list(get("synth.appliances"), ',')) {
        const std::vector<std::string> f = split_list(item, ':');
        if (f.size() < 5 || f.size() > 7) {
            throw ConfigError("synth.appliances entry '" + item +
                              "' must be name:kind:on_watts:period_s:on_duration_s[:jitter[:noise_sd]]");
        }
        ApplianceProfile p;
        p.name = f[0];
        p.kind = profile_kind_from_string(f[1]);
        p.on_watts = parse_double("synth.appliances", f[2]);
        p.period_seconds = parse_double("synth.appliances", f[3]);
        p.on_duration_seconds = parse_double("synth.appliances", f[4]);
        if (f.size() > 5) p.jitter = parse_double("synth.appliances", f[5]);
        if (f.size() > 6) p.noise_sd_watts = parse_double("synth.appliances", f[6]);
        out.push_back(std::move(p));
    }
    if (out.empty()) throw ConfigError("synth.appliances is empty");
    return out;
}

std::string RunConfig::checkpoint_dir() const {
    const std::string dir = trim(get("evaluate.checkpoint_dir"));
    return dir.empty() ? out_dir().string() : dir;
}

}  // namespace nilm
