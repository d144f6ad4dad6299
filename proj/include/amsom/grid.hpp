#pragma once

// Initial map construction: sizing heuristic, lattice layout, random weights
// and the growing threshold.

#include "amsom/core.hpp"

#include <cstdint>
#include <string_view>

namespace amsom {

enum class Topology { rectangular, hexagonal };

[[nodiscard]] std::string_view to_string(Topology t);
/// Parses "rectangular"/"rect" or "hexagonal"/"hex". Throws ConfigError.
[[nodiscard]] Topology parse_topology(std::string_view s);

/// Maximum neighbour count of the lattice (4 rectangular, 6 hexagonal).
[[nodiscard]] constexpr int max_degree(Topology t) { return t == Topology::rectangular ? 4 : 6; }

struct LatticeSpec {
    int rows = 2;
    int cols = 2;
    Topology topology = Topology::rectangular;

    [[nodiscard]] int neurons() const { return rows * cols; }
    [[nodiscard]] int q() const { return max_degree(topology); }
};

/// Largest eigenvalue ratio used for the side-length heuristic.
inline constexpr double kMaxEigenRatio = 10.0;

/// round(5 * sqrt(N)).
[[nodiscard]] int target_neuron_count(Index patterns);

/// Two largest eigenvalues of the feature covariance matrix, descending.
/// Returns {v, 0} for one-dimensional data.
[[nodiscard]] std::pair<double, double> leading_eigenvalues(const Dataset& data);

/// Grid sides for a desired side ratio rows/cols (>= 1) and neuron target.
///
/// Among all pairs rows >= cols >= 2 whose ratio lies within a factor 1.25 of
/// `side_ratio`, picks the one whose product is closest to `target`, then the
/// one with the closest ratio, then the smaller product, then the squarer
/// shape. Ratio errors within 1e-12 count as ties. If no pair satisfies the
/// ratio band the closest product wins outright.
[[nodiscard]] std::pair<int, int> side_lengths_for_ratio(double side_ratio, int target);

/// Side lengths from the data covariance: side ratio sqrt(l1/l2) with the
/// eigenvalue ratio capped at kMaxEigenRatio; falls back to a square grid for
/// D < 2 or a degenerate spectrum.
[[nodiscard]] std::pair<int, int> side_lengths(const Dataset& data, int target);

/// Positions and lattice connectivity. Weights are zero-filled with dimension
/// `dim`.
///
/// Rectangular neuron (row y, col x) sits at (x, y). Hexagonal rows are offset
/// by 0.5 on odd rows with a vertical pitch of sqrt(3)/2, so every lattice
/// neighbour is at unit distance.
[[nodiscard]] MapState build_lattice(const LatticeSpec& spec, Index dim = 0);

/// Draws every weight component uniformly from the [min, max] range of the
/// corresponding feature. Deterministic for a given seed.
void init_weights(MapState& map, const Dataset& data, std::uint64_t seed);

/// GT = -ln(D) * ln(SF). Throws ConfigError unless D >= 2 and 0 < SF < 1.
[[nodiscard]] double growing_threshold(Index dim, double spread_factor);

}  // namespace amsom
