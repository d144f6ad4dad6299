#pragma once

// Fundamental types shared by the AMSOM trainer and the baseline batch SOM:
// datasets, the mutable map state, and winner search.

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace amsom {

using Index = Eigen::Index;

/// Row-major matrix: one pattern (or one neuron weight vector) per row.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Positions = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;
using IntMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr Index kNoNeuron = -1;

/// N patterns of dimension D, with optional integer class labels.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(RowMatrix patterns, std::optional<std::vector<int>> labels = std::nullopt);

    [[nodiscard]] Index size() const { return patterns_.rows(); }
    [[nodiscard]] Index dim() const { return patterns_.cols(); }
    [[nodiscard]] const RowMatrix& patterns() const { return patterns_; }
    [[nodiscard]] auto pattern(Index j) const { return patterns_.row(j); }
    [[nodiscard]] bool has_labels() const { return labels_.has_value(); }
    [[nodiscard]] const std::vector<int>& labels() const;

    /// New dataset holding the given rows, in the given order.
    [[nodiscard]] Dataset subset(std::span<const Index> rows) const;

private:
    RowMatrix patterns_;
    std::optional<std::vector<int>> labels_;
};

/// Weights, output-space positions, connectivity and edge ages of a map.
///
/// `edges` is a symmetric 0/1 matrix with zero diagonal. `ages` is symmetric
/// with zero diagonal and may only be positive where an edge exists. All
/// mutators below keep both matrices symmetric.
struct MapState {
    RowMatrix weights;     // M x D
    Positions positions;   // M x 2
    IntMatrix edges;       // M x M
    IntMatrix ages;        // M x M
    std::vector<long> win_count;

    /// Unweighted map with M neurons, no edges, zero weights of dimension D.
    static MapState empty(Index neurons, Index dim);

    [[nodiscard]] Index size() const { return weights.rows(); }
    [[nodiscard]] Index dim() const { return weights.cols(); }

    [[nodiscard]] bool connected(Index p, Index q) const { return edges(p, q) != 0; }
    [[nodiscard]] int degree(Index p) const;
    [[nodiscard]] std::vector<Index> neighbors(Index p) const;
    [[nodiscard]] long edge_count() const;

    /// Creates (or keeps) the edge p-q and sets its age to zero.
    void connect(Index p, Index q);
    /// Removes the edge p-q and clears its age.
    void disconnect(Index p, Index q);

    /// Deletes the listed neurons and compacts the remaining indices,
    /// preserving their relative order.
    void remove_neurons(std::vector<Index> doomed);
};

/// Returns a description of the first violated structural invariant, or
/// nothing when the map is consistent. `max_degree` is only checked when set;
/// `require_connected_neurons` demands that every neuron has an edge.
[[nodiscard]] std::optional<std::string> find_invariant_violation(
    const MapState& map, std::optional<int> max_degree = std::nullopt,
    bool require_connected_neurons = true);

/// Per-pattern winner, runner-up and squared distance to the winner.
struct Assignment {
    std::vector<Index> winner;
    std::vector<Index> second;   // kNoNeuron on single-neuron maps
    std::vector<double> dist;    // squared distance to winner

    [[nodiscard]] std::size_t size() const { return winner.size(); }
};

/// ||x - w||^2. Throws DataError on dimension mismatch.
[[nodiscard]] double squared_distance(std::span<const double> x, std::span<const double> w);

[[noreturn]] void throw_dimension_mismatch(Index got, Index expected);

template <typename A, typename B>
[[nodiscard]] double squared_distance(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& w) {
    if (x.size() != w.size()) throw_dimension_mismatch(x.size(), w.size());
    double s = 0.0;
    for (Index k = 0; k < x.size(); ++k) {
        const double d = x(k) - w(k);
        s += d * d;
    }
    return s;
}

/// Best and second-best matching neurons for x; ties go to the lowest index.
/// Throws StructuralError when the map has fewer than two neurons.
[[nodiscard]] std::pair<Index, Index> find_winner_pair(std::span<const double> x, const MapState& map);

/// Winner search for every pattern against the current (frozen) weights.
[[nodiscard]] Assignment assign_all(const Dataset& data, const MapState& map);

}  // namespace amsom
