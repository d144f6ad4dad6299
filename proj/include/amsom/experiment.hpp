#pragma once

// The benchmark protocol: repeated seeded runs of AMSOM and the batch SOM
// baseline on shuffled splits, aggregated into summary tables.

#include "amsom/config.hpp"
#include "amsom/metrics.hpp"
#include "amsom/snapshot.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace amsom {

/// splitmix64 of base + stream * golden ratio; distinct streams give
/// well-mixed independent seeds.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Loads the CSV file or generates the synthetic dataset named by the spec.
[[nodiscard]] Dataset load_experiment_data(const ExperimentSpec& spec);

struct RunResult {
    int run = 0;
    std::uint64_t seed = 0;
    LatticeSpec lattice;
    QualityReport amsom_train;
    QualityReport amsom_test;
    QualityReport som_train;
    QualityReport som_test;
    int amsom_epochs = 0;
    int smooth_epochs = 0;
    int som_epochs = 0;
    /// Final maps evaluated on the run's training split.
    MapSnapshot amsom;
    MapSnapshot som;
};

struct Stat {
    double mean = 0.0;
    double std = 0.0;  // population deviation, zero for a single run
};

[[nodiscard]] Stat summarize(const std::vector<double>& values);

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<RunResult> runs;
    /// Set when a run threw; `runs` then holds only the runs before it.
    std::optional<int> failed_run;
    std::string failure;

    [[nodiscard]] bool complete() const { return !failed_run.has_value(); }
};

using RunCallback = std::function<void(const RunResult&)>;

/// Runs every repetition in order. Config and data errors raised before the
/// first run propagate; an error inside a run stops the loop and is recorded
/// in the result.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentSpec& spec, const RunCallback& on_run = {});
[[nodiscard]] ExperimentResult run_experiment(const ExperimentSpec& spec, const Dataset& data,
                                              const RunCallback& on_run = {});

/// One row per metric: metric, amsom_mean, amsom_std, som_mean, som_std.
[[nodiscard]] std::string summary_csv(const ExperimentResult& result);
/// One row per run with both models' train and test measures.
[[nodiscard]] std::string runs_csv(const ExperimentResult& result);
[[nodiscard]] std::string summary_text(const ExperimentResult& result);
[[nodiscard]] nlohmann::ordered_json summary_json(const ExperimentResult& result);

/// Writes summary.csv, summary.json, summary.txt, runs.csv and per-run
/// snapshots (run_NN_amsom.json, run_NN_som.json, plus SVGs when enabled)
/// into `dir`, creating it if needed.
void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace amsom
