#pragma once

// AMSOM training: batch weight updates, self-organising neuron positions,
// edge ageing, neuron removal and cell-division growth, followed by a
// structure-frozen smoothing phase.

#include "amsom/core.hpp"
#include "amsom/grid.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace amsom {

/// How the cell-division mutation factor beta is drawn.
enum class BetaMode {
    clamped_gaussian,  // N(0, 1) clamped to [-beta_clamp, beta_clamp]
    gaussian,          // N(0, 1), unclamped
    fixed,             // always beta_fixed
};

/// Per-neuron error used against the growing threshold.
enum class NeuronErrorMode {
    mean,  // mean distance of the patterns won by the neuron
    sum,   // accumulated distance (GSOM-style)
};

[[nodiscard]] std::string_view to_string(BetaMode m);
[[nodiscard]] BetaMode parse_beta_mode(std::string_view s);
[[nodiscard]] std::string_view to_string(NeuronErrorMode m);
[[nodiscard]] NeuronErrorMode parse_neuron_error_mode(std::string_view s);

struct TrainConfig {
    double spread_factor = 0.5;
    double gamma = 4.0;
    double alpha_train = 0.01;
    double alpha_smooth = 0.001;
    int age_max = 30;
    int t_add = 30;
    int max_epochs = 1000;
    int smooth_max_epochs = 500;
    double eps1 = 1e-6;
    double eps2 = 1e-10;
    /// Initial neighbourhood width; <= 0 means half the longer lattice side.
    double sigma0 = 0.0;
    double sigma_final = 1.0;
    Topology topology = Topology::rectangular;
    /// Maximum neuron degree; <= 0 means the topology default (4 or 6).
    int q = 0;
    BetaMode beta_mode = BetaMode::clamped_gaussian;
    double beta_clamp = 0.5;
    double beta_fixed = 0.0;
    NeuronErrorMode neuron_error = NeuronErrorMode::mean;
    /// Rescale positions after every position update so the mean edge length
    /// stays one lattice unit.
    bool normalize_layout = true;
    std::uint64_t seed = 1;

    [[nodiscard]] int max_degree() const { return q > 0 ? q : amsom::max_degree(topology); }

    /// Throws ConfigError describing the first invalid field.
    void validate() const;
};

struct StructuralEvent {
    enum class Kind {
        edge_pruned,     // aged out (a, b)
        edge_trimmed,    // dropped by the degree limit (a, b)
        neuron_removed,  // isolated neuron a
        neuron_split,    // a split, new neuron b, neighbour used for placement c
        removal_floor,   // removal skipped to keep two neurons; a, b survive
    };
    Kind kind;
    Index a = kNoNeuron;
    Index b = kNoNeuron;
    Index c = kNoNeuron;
};

[[nodiscard]] std::string_view to_string(StructuralEvent::Kind k);

struct EpochReport {
    int epoch = 0;
    double sigma = 0.0;
    double mqe = 0.0;
    Index neurons = 0;
    long edges = 0;
    /// Empty optional marks a neuron that won no pattern.
    std::vector<std::optional<double>> neuron_qe;
    std::vector<StructuralEvent> events;
};

/// Invoked after every epoch with the report and the map as it stands.
using EpochCallback = std::function<void(const EpochReport&, const MapState&)>;

struct TrainResult {
    MapState map;
    std::vector<EpochReport> reports;

    [[nodiscard]] int epochs() const { return static_cast<int>(reports.size()); }
};

/// Which neuron pairs contribute to the update sums.
enum class NeighborhoodScope {
    all,    // every neuron; the Gaussian kernels do the localisation
    graph,  // only the neuron itself and its current graph neighbours
};

/// exp(-||r_j - r_i||^2 / sigma^2), the output-space kernel.
[[nodiscard]] double neighborhood_output(const Eigen::Vector2d& rj, const Eigen::Vector2d& ri, double sigma);

/// exp(-||w_j - w_i||^2 / (gamma sigma^2)), the input-space kernel.
[[nodiscard]] double neighborhood_input(std::span<const double> wj, std::span<const double> wi, double sigma,
                                        double gamma);

/// Sigma for epoch t of a phase capped at `max_epochs`: exponential decay from
/// sigma0 to sigma_final.
[[nodiscard]] double sigma_at(int epoch, int max_epochs, double sigma0, double sigma_final);

/// Half the longer side of the bounding box of the lattice positions, plus one
/// cell: max(rows, cols) / 2 for a fresh rectangular lattice.
[[nodiscard]] double default_sigma0(const MapState& map);

/// Per-neuron win counts n_j from an assignment.
[[nodiscard]] std::vector<long> win_counts(const Assignment& assignment, Index neurons);

/// Batch SOM weights: w_i = sum_j n_j h_ji xbar_j / sum_j n_j h_ji over the
/// neurons j with n_j > 0. Neurons with a zero denominator keep their weight.
[[nodiscard]] RowMatrix batch_weight_update(const MapState& map, const Assignment& assignment,
                                            const Dataset& data, double sigma,
                                            NeighborhoodScope scope = NeighborhoodScope::all);

/// Moves every position by alpha times the n_j delta_ji weighted mean
/// displacement towards the other neurons (self excluded). delta is computed
/// from the map's current weights. Zero denominators leave the neuron in place.
[[nodiscard]] Positions position_update(const MapState& map, const Assignment& assignment, double sigma,
                                        double alpha, double gamma,
                                        NeighborhoodScope scope = NeighborhoodScope::all);

/// Mean output-space length of the current edges (0 without edges).
[[nodiscard]] double mean_edge_length(const MapState& map);

/// Scales positions about their centroid so that mean_edge_length() == 1.
/// Maps without edges or with collapsed edges are left alone.
void normalize_layout(MapState& map);

/// Competitive-Hebbian edge step for one presented pattern: counts the win,
/// ages every edge of the winner by one, then connects winner and runner-up
/// with age zero. Throws StructuralError when winner == second.
void process_pattern_edges(MapState& map, Index winner, Index second);

/// Drops every edge with age >= age_max and removes the neurons it isolates.
/// Event indices refer to the map before compaction.
std::vector<StructuralEvent> prune_edges_and_neurons(MapState& map, int age_max);

/// Removes isolated neurons, never going below two neurons. When the floor
/// binds, the two neurons with the most wins survive (lowest index on ties)
/// and are connected to each other.
std::vector<StructuralEvent> remove_isolated_neurons(MapState& map);

/// Per-neuron quantisation error of the patterns won by each neuron.
[[nodiscard]] std::vector<std::optional<double>> neuron_errors(const Assignment& assignment, Index neurons,
                                                               NeuronErrorMode mode = NeuronErrorMode::mean);

/// Draws beta according to the configured mode.
[[nodiscard]] double draw_beta(const TrainConfig& config, std::mt19937_64& rng);

/// Cell division of the neuron with the largest error, if it exceeds `threshold`.
///
/// The parent u keeps its index as offspring u1 = ((1 + beta) w_u, r_u); the
/// second offspring u2 = (-beta w_u, (r_u + r_v) / 2) is appended, where v is
/// u's neighbour with the largest error. Both inherit u's edges, are joined to
/// each other, and all their edge ages are zero. Nothing happens when
/// `epochs_since_add < t_add`; `beta` is only invoked when a split happens.
std::optional<StructuralEvent> maybe_add_neuron(MapState& map, const std::vector<std::optional<double>>& errors,
                                                double threshold, int epochs_since_add, int t_add,
                                                const std::function<double()>& beta);

/// Trims every neuron above `q` neighbours down to its q youngest edges
/// (ties: lowest peer index), in ascending neuron order. Peers left isolated
/// are removed.
std::vector<StructuralEvent> enforce_degree(MapState& map, int q);

/// Mean Euclidean distance from each pattern to its winner.
[[nodiscard]] double mean_quantization_error(const Assignment& assignment);

/// Phase II training. The map must come from build_lattice + init_weights.
[[nodiscard]] TrainResult train(const Dataset& data, MapState map, const TrainConfig& config,
                                const EpochCallback& on_epoch = {});

/// Phase III: weight and position refinement restricted to graph neighbours,
/// sigma fixed at sigma_final, no structural changes.
[[nodiscard]] TrainResult smooth(const Dataset& data, MapState map, const TrainConfig& config,
                                 const EpochCallback& on_epoch = {});

}  // namespace amsom
