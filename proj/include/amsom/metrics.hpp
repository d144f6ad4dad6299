#pragma once

// Map quality measures: quantization error, topographic error, dead units and
// majority-vote neuron labels.

#include "amsom/core.hpp"

#include <optional>
#include <vector>

namespace amsom {

/// Mean Euclidean distance from each pattern to its best-matching neuron.
[[nodiscard]] double quantization_error(const Dataset& data, const MapState& map);

/// Fraction of patterns whose best and second-best neurons share no edge.
/// For the baseline SOM the edges are the fixed lattice adjacency.
[[nodiscard]] double topographic_error(const Dataset& data, const MapState& map);

/// Neurons winning no pattern.
[[nodiscard]] Index dead_unit_count(const Dataset& data, const MapState& map);

/// Majority class of the patterns won by each neuron; ties go to the lowest
/// class id, neurons without wins stay unlabeled.
[[nodiscard]] std::vector<std::optional<int>> label_neurons(const Dataset& data, const MapState& map);

struct QualityReport {
    double qe = 0.0;
    double te = 0.0;
    Index dead_units = 0;
    double dead_fraction = 0.0;
    Index neurons = 0;
    std::vector<std::optional<int>> neuron_labels;  // empty when the data is unlabeled
};

/// All measures from a single winner search.
[[nodiscard]] QualityReport evaluate(const Dataset& data, const MapState& map);

}  // namespace amsom
