#include "amsom/config.hpp"

#include "amsom/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace amsom {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
    throw ConfigError("'" + key + "' expects " + expected + ", got '" + value + "'");
}

double to_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (value.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) bad_value(key, value, "a number");
    return v;
}

template <typename Int>
Int to_integer(const std::string& key, const std::string& value) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value, "an integer");
    return v;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    bad_value(key, value, "true or false");
}

SplitFractions to_split(const std::string& key, const std::string& value) {
    SplitFractions out{};
    std::istringstream in(value);
    std::string part;
    std::size_t n = 0;
    while (std::getline(in, part, ',')) {
        if (n == out.size()) bad_value(key, value, "three comma-separated fractions");
        out[n++] = to_double(key, trim(part));
    }
    if (n != out.size()) bad_value(key, value, "three comma-separated fractions");
    return out;
}

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::string& source) {
    KeyValues kv;
    std::set<std::string> seen;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        const std::string at = source + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(at + ": expected key = value");
        std::string key = trim(std::string_view(text).substr(0, eq));
        std::string value = trim(std::string_view(text).substr(eq + 1));
        if (key.empty()) throw ConfigError(at + ": empty key");
        if (!seen.insert(key).second) throw ConfigError(at + ": duplicate key '" + key + "'");
        kv.emplace_back(std::move(key), std::move(value));
    }
    return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_key_values(in, path.string());
}

bool set_train_field(TrainConfig& c, const std::string& key, const std::string& value) {
    if (key == "spread_factor" || key == "SF") c.spread_factor = to_double(key, value);
    else if (key == "gamma") c.gamma = to_double(key, value);
    else if (key == "alpha_train") c.alpha_train = to_double(key, value);
    else if (key == "alpha_smooth") c.alpha_smooth = to_double(key, value);
    else if (key == "age_max") c.age_max = to_integer<int>(key, value);
    else if (key == "t_add") c.t_add = to_integer<int>(key, value);
    else if (key == "max_epochs") c.max_epochs = to_integer<int>(key, value);
    else if (key == "smooth_max_epochs") c.smooth_max_epochs = to_integer<int>(key, value);
    else if (key == "eps1") c.eps1 = to_double(key, value);
    else if (key == "eps2") c.eps2 = to_double(key, value);
    else if (key == "sigma0") c.sigma0 = to_double(key, value);
    else if (key == "sigma_final") c.sigma_final = to_double(key, value);
    else if (key == "topology") c.topology = parse_topology(value);
    else if (key == "q" || key == "Q") c.q = to_integer<int>(key, value);
    else if (key == "beta_mode") c.beta_mode = parse_beta_mode(value);
    else if (key == "beta_clamp") c.beta_clamp = to_double(key, value);
    else if (key == "beta_fixed") c.beta_fixed = to_double(key, value);
    else if (key == "neuron_error") c.neuron_error = parse_neuron_error_mode(value);
    else if (key == "normalize_layout") c.normalize_layout = to_bool(key, value);
    else if (key == "seed") c.seed = to_integer<std::uint64_t>(key, value);
    else return false;
    return true;
}

TrainConfig parse_train_config(const KeyValues& kv, TrainConfig base) {
    for (const auto& [key, value] : kv)
        if (!set_train_field(base, key, value)) throw ConfigError("unknown config key '" + key + "'");
    base.validate();
    return base;
}

nlohmann::ordered_json to_json(const TrainConfig& c) {
    nlohmann::ordered_json j;
    j["spread_factor"] = c.spread_factor;
    j["gamma"] = c.gamma;
    j["alpha_train"] = c.alpha_train;
    j["alpha_smooth"] = c.alpha_smooth;
    j["age_max"] = c.age_max;
    j["t_add"] = c.t_add;
    j["max_epochs"] = c.max_epochs;
    j["smooth_max_epochs"] = c.smooth_max_epochs;
    j["eps1"] = c.eps1;
    j["eps2"] = c.eps2;
    j["sigma0"] = c.sigma0;
    j["sigma_final"] = c.sigma_final;
    j["topology"] = to_string(c.topology);
    j["q"] = c.max_degree();
    j["beta_mode"] = to_string(c.beta_mode);
    j["beta_clamp"] = c.beta_clamp;
    j["beta_fixed"] = c.beta_fixed;
    j["neuron_error"] = to_string(c.neuron_error);
    j["normalize_layout"] = c.normalize_layout;
    j["seed"] = c.seed;
    return j;
}

void ExperimentSpec::validate() const {
    if (dataset.empty()) throw ConfigError("dataset is required");
    if (runs < 1) throw ConfigError("runs must be >= 1");
    double total = 0.0;
    for (double f : split) {
        if (!(f > 0.0)) throw ConfigError("split fractions must be positive");
        total += f;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");
    config.validate();
}

ExperimentSpec parse_experiment_spec(const KeyValues& kv) {
    ExperimentSpec spec;
    for (const auto& [key, value] : kv) {
        if (key == "dataset") spec.dataset = value;
        else if (key == "label_column") spec.label_column = value.empty() ? std::nullopt : std::optional(value);
        else if (key == "split") spec.split = to_split(key, value);
        else if (key == "runs") spec.runs = to_integer<int>(key, value);
        else if (key == "normalize") spec.normalize = to_bool(key, value);
        else if (key == "data_seed") spec.data_seed = to_integer<std::uint64_t>(key, value);
        else if (key == "svg") spec.svg = to_bool(key, value);
        else if (key == "output_dir") spec.output_dir = value;
        else if (!set_train_field(spec.config, key, value)) throw ConfigError("unknown config key '" + key + "'");
    }
    spec.validate();
    return spec;
}

nlohmann::ordered_json to_json(const ExperimentSpec& spec) {
    nlohmann::ordered_json j;
    j["dataset"] = spec.dataset;
    j["label_column"] = spec.label_column ? nlohmann::ordered_json(*spec.label_column) : nullptr;
    j["split"] = spec.split;
    j["runs"] = spec.runs;
    j["normalize"] = spec.normalize;
    j["data_seed"] = spec.data_seed;
    j["train"] = to_json(spec.config);
    return j;
}

}  // namespace amsom
