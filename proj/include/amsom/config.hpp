#pragma once

// Flat key=value configuration files for training and benchmark runs.

#include "amsom/data.hpp"
#include "amsom/engine.hpp"

#include <json.hpp>

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace amsom {

/// One `key = value` per line; '#' starts a comment, blank lines are ignored.
/// Keys keep their file order. Duplicate keys and lines without '=' throw
/// ConfigError naming the line.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

[[nodiscard]] KeyValues parse_key_values(std::istream& in, const std::string& source = "<config>");
[[nodiscard]] KeyValues read_key_values(const std::filesystem::path& path);

/// Sets one TrainConfig field by name. Returns false for an unknown key and
/// throws ConfigError for a malformed value.
bool set_train_field(TrainConfig& config, const std::string& key, const std::string& value);

/// Every key must name a TrainConfig field. The result is validated.
[[nodiscard]] TrainConfig parse_train_config(const KeyValues& kv, TrainConfig base = {});

[[nodiscard]] nlohmann::ordered_json to_json(const TrainConfig& config);

inline constexpr std::string_view kClusterDataset = "cluster";

struct ExperimentSpec {
    /// CSV path, or "cluster" for the synthetic four-blob dataset.
    std::string dataset;
    std::optional<std::string> label_column;
    SplitFractions split = kDefaultSplit;
    int runs = 20;
    /// Min-max scale features on the training split of each run.
    bool normalize = false;
    /// Seed of the synthetic generator; CSV data ignores it.
    std::uint64_t data_seed = 7;
    bool svg = true;
    std::filesystem::path output_dir = "results";
    TrainConfig config;

    /// Throws ConfigError on the first invalid field.
    void validate() const;
};

/// Experiment keys plus any TrainConfig key. `dataset` is required.
[[nodiscard]] ExperimentSpec parse_experiment_spec(const KeyValues& kv);

[[nodiscard]] nlohmann::ordered_json to_json(const ExperimentSpec& spec);

}  // namespace amsom
