#include "amsom/core.hpp"

#include "amsom/error.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace amsom {

Dataset::Dataset(RowMatrix patterns, std::optional<std::vector<int>> labels)
    : patterns_(std::move(patterns)), labels_(std::move(labels)) {
    if (patterns_.rows() < 1) throw DataError("dataset has no patterns");
    if (patterns_.cols() < 1) throw DataError("dataset has zero feature dimension");
    if (labels_ && static_cast<Index>(labels_->size()) != patterns_.rows()) {
        std::ostringstream msg;
        msg << "label count " << labels_->size() << " does not match pattern count " << patterns_.rows();
        throw DataError(msg.str());
    }
}

const std::vector<int>& Dataset::labels() const {
    if (!labels_) throw DataError("dataset has no class labels");
    return *labels_;
}

Dataset Dataset::subset(std::span<const Index> rows) const {
    RowMatrix sub(static_cast<Index>(rows.size()), dim());
    std::optional<std::vector<int>> sub_labels;
    if (labels_) sub_labels.emplace().reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        sub.row(static_cast<Index>(k)) = patterns_.row(rows[k]);
        if (labels_) sub_labels->push_back((*labels_)[static_cast<std::size_t>(rows[k])]);
    }
    return Dataset(std::move(sub), std::move(sub_labels));
}

MapState MapState::empty(Index neurons, Index dim) {
    MapState m;
    m.weights = RowMatrix::Zero(neurons, dim);
    m.positions = Positions::Zero(neurons, 2);
    m.edges = IntMatrix::Zero(neurons, neurons);
    m.ages = IntMatrix::Zero(neurons, neurons);
    m.win_count.assign(static_cast<std::size_t>(neurons), 0);
    return m;
}

int MapState::degree(Index p) const { return edges.row(p).sum(); }

std::vector<Index> MapState::neighbors(Index p) const {
    std::vector<Index> out;
    for (Index q = 0; q < size(); ++q)
        if (edges(p, q) != 0) out.push_back(q);
    return out;
}

long MapState::edge_count() const { return static_cast<long>(edges.sum()) / 2; }

void MapState::connect(Index p, Index q) {
    if (p == q) throw StructuralError("cannot connect a neuron to itself");
    edges(p, q) = edges(q, p) = 1;
    ages(p, q) = ages(q, p) = 0;
}

void MapState::disconnect(Index p, Index q) {
    edges(p, q) = edges(q, p) = 0;
    ages(p, q) = ages(q, p) = 0;
}

void MapState::remove_neurons(std::vector<Index> doomed) {
    std::sort(doomed.begin(), doomed.end());
    doomed.erase(std::unique(doomed.begin(), doomed.end()), doomed.end());
    if (doomed.empty()) return;

    std::vector<Index> keep;
    keep.reserve(static_cast<std::size_t>(size()));
    for (Index i = 0, d = 0; i < size(); ++i) {
        if (d < static_cast<Index>(doomed.size()) && doomed[static_cast<std::size_t>(d)] == i) {
            ++d;
            continue;
        }
        keep.push_back(i);
    }

    RowMatrix w = weights(keep, Eigen::all);
    Positions r = positions(keep, Eigen::all);
    IntMatrix e = edges(keep, keep);
    IntMatrix a = ages(keep, keep);
    std::vector<long> wins;
    wins.reserve(keep.size());
    for (Index i : keep) wins.push_back(win_count[static_cast<std::size_t>(i)]);

    weights = std::move(w);
    positions = std::move(r);
    edges = std::move(e);
    ages = std::move(a);
    win_count = std::move(wins);
}

std::optional<std::string> find_invariant_violation(const MapState& map, std::optional<int> max_degree,
                                                    bool require_connected_neurons) {
    const Index m = map.size();
    std::ostringstream msg;
    if (map.positions.rows() != m || map.edges.rows() != m || map.edges.cols() != m || map.ages.rows() != m ||
        map.ages.cols() != m || static_cast<Index>(map.win_count.size()) != m) {
        msg << "inconsistent map dimensions (M=" << m << ")";
        return msg.str();
    }
    if (!map.weights.allFinite() || !map.positions.allFinite()) return "non-finite weight or position";
    for (Index p = 0; p < m; ++p) {
        if (map.edges(p, p) != 0 || map.ages(p, p) != 0) {
            msg << "non-zero diagonal at neuron " << p;
            return msg.str();
        }
        for (Index q = p + 1; q < m; ++q) {
            const int e = map.edges(p, q);
            if (e != map.edges(q, p) || map.ages(p, q) != map.ages(q, p)) {
                msg << "asymmetric entry at (" << p << "," << q << ")";
                return msg.str();
            }
            if (e != 0 && e != 1) {
                msg << "edge value " << e << " at (" << p << "," << q << ")";
                return msg.str();
            }
            if (map.ages(p, q) < 0 || (map.ages(p, q) > 0 && e == 0)) {
                msg << "age " << map.ages(p, q) << " without edge at (" << p << "," << q << ")";
                return msg.str();
            }
        }
        const int deg = map.degree(p);
        if (max_degree && deg > *max_degree) {
            msg << "neuron " << p << " has degree " << deg << " > " << *max_degree;
            return msg.str();
        }
        if (require_connected_neurons && deg == 0) {
            msg << "neuron " << p << " is isolated";
            return msg.str();
        }
    }
    return std::nullopt;
}

void throw_dimension_mismatch(Index got, Index expected) {
    std::ostringstream msg;
    msg << "dimension mismatch: " << got << " vs " << expected;
    throw DataError(msg.str());
}

double squared_distance(std::span<const double> x, std::span<const double> w) {
    if (x.size() != w.size()) throw_dimension_mismatch(static_cast<Index>(x.size()), static_cast<Index>(w.size()));
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - w[k];
        s += d * d;
    }
    return s;
}

namespace {

struct Best2 {
    Index first = kNoNeuron;
    Index second = kNoNeuron;
    double d1 = std::numeric_limits<double>::infinity();
    double d2 = std::numeric_limits<double>::infinity();
};

// Strict comparisons keep the earliest index on ties.
Best2 scan(const double* x, const MapState& map) {
    Best2 b;
    const Index dim = map.dim();
    for (Index i = 0; i < map.size(); ++i) {
        const double* w = map.weights.row(i).data();
        double d = 0.0;
        for (Index k = 0; k < dim; ++k) {
            const double t = x[k] - w[k];
            d += t * t;
        }
        if (d < b.d1) {
            b.second = b.first;
            b.d2 = b.d1;
            b.first = i;
            b.d1 = d;
        } else if (d < b.d2) {
            b.second = i;
            b.d2 = d;
        }
    }
    return b;
}

}  // namespace

std::pair<Index, Index> find_winner_pair(std::span<const double> x, const MapState& map) {
    if (map.size() < 2) throw StructuralError("second-best neuron is undefined on a map with fewer than 2 neurons");
    if (static_cast<Index>(x.size()) != map.dim()) throw_dimension_mismatch(static_cast<Index>(x.size()), map.dim());
    const Best2 b = scan(x.data(), map);
    return {b.first, b.second};
}

Assignment assign_all(const Dataset& data, const MapState& map) {
    if (data.dim() != map.dim()) throw_dimension_mismatch(data.dim(), map.dim());
    if (map.size() < 1) throw StructuralError("cannot assign patterns to an empty map");
    Assignment out;
    const auto n = static_cast<std::size_t>(data.size());
    out.winner.resize(n);
    out.second.resize(n);
    out.dist.resize(n);
    for (Index j = 0; j < data.size(); ++j) {
        const Best2 b = scan(data.patterns().row(j).data(), map);
        const auto k = static_cast<std::size_t>(j);
        out.winner[k] = b.first;
        out.second[k] = b.second;
        out.dist[k] = b.d1;
    }
    return out;
}

}  // namespace amsom
