#include "amsom/error.hpp"
#include "amsom/grid.hpp"
#include "amsom/metrics.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace amsom;
using testutil::dataset;
using testutil::rows;

namespace {

MapState chain(std::initializer_list<std::initializer_list<double>> w) {
    RowMatrix weights = rows(w);
    MapState m = MapState::empty(weights.rows(), weights.cols());
    m.weights = weights;
    for (Index i = 0; i + 1 < m.size(); ++i) m.connect(i, i + 1);
    return m;
}

// Oracles by exhaustive search.
Index nearest(const MapState& m, const Eigen::RowVectorXd& x, Index skip = kNoNeuron) {
    Index best = kNoNeuron;
    for (Index i = 0; i < m.size(); ++i) {
        if (i == skip) continue;
        if (best == kNoNeuron || (x - m.weights.row(i)).norm() < (x - m.weights.row(best)).norm()) best = i;
    }
    return best;
}

}  // namespace

TEST_CASE("quantization error") {
    SUBCASE("neurons on the patterns") {
        const Dataset d = dataset({{0, 0}, {1, 1}});
        CHECK(quantization_error(d, chain({{0, 0}, {1, 1}})) == 0.0);
    }
    SUBCASE("hand example") {
        const Dataset d = dataset({{0, 0}, {3, 4}, {10, 0}});
        // Distances 0, 5 and 1.
        CHECK(quantization_error(d, chain({{0, 0}, {10, 1}})) == doctest::Approx(2.0));
    }
    SUBCASE("single neuron at the mean") {
        const Dataset d = testutil::random_dataset(20, 3, 4);
        MapState m = MapState::empty(1, 3);
        m.weights.row(0) = d.patterns().colwise().mean();
        double oracle = 0.0;
        for (Index p = 0; p < d.size(); ++p) oracle += (d.pattern(p) - m.weights.row(0)).norm() / 20.0;
        CHECK(quantization_error(d, m) == doctest::Approx(oracle).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)quantization_error(dataset({{0, 0, 0}}), chain({{0, 0}, {1, 1}})), DataError);
}

TEST_CASE("topographic error") {
    SUBCASE("winner and runner-up always adjacent on a chain") {
        const Dataset d = dataset({{0.1}, {0.9}, {1.6}, {2.4}});
        CHECK(topographic_error(d, chain({{0}, {1}, {2}, {3}})) == 0.0);
    }
    SUBCASE("missing edge counts") {
        MapState m = chain({{0}, {1}, {2}});
        m.disconnect(0, 1);
        m.connect(0, 2);
        const Dataset d = dataset({{0.2}, {0.8}, {1.9}, {2.2}});
        // Pairs (0,1) (1,0) (2,1) (2,1): two of four lack an edge.
        CHECK(topographic_error(d, m) == doctest::Approx(0.5));
    }
    SUBCASE("agrees with an exhaustive count") {
        const Dataset d = testutil::random_dataset(60, 2, 7);
        MapState m = build_lattice({3, 3, Topology::rectangular}, 2);
        init_weights(m, d, 8);
        int broken = 0;
        for (Index p = 0; p < d.size(); ++p) {
            const Index w = nearest(m, d.pattern(p));
            broken += !m.connected(w, nearest(m, d.pattern(p), w));
        }
        CHECK(topographic_error(d, m) == doctest::Approx(broken / 60.0));
    }
    MapState one = MapState::empty(1, 1);
    CHECK_THROWS_AS((void)topographic_error(dataset({{0}}), one), StructuralError);
}

TEST_CASE("evaluate, dead units and labels") {
    const Dataset d(rows({{0.0}, {0.1}, {0.2}, {2.0}, {2.1}, {5.0}}), std::vector<int>{1, 0, 1, 2, 0, 3});
    const MapState m = chain({{0.1}, {1.0}, {2.0}, {5.0}});
    const QualityReport q = evaluate(d, m);
    CHECK(q.neurons == 4);
    CHECK(q.dead_units == 1);
    CHECK(q.dead_fraction == doctest::Approx(0.25));
    CHECK(dead_unit_count(d, m) == 1);
    CHECK(q.qe == doctest::Approx(quantization_error(d, m)));
    CHECK(q.te == doctest::Approx(topographic_error(d, m)));
    REQUIRE(q.neuron_labels.size() == 4);
    CHECK(q.neuron_labels[0] == 1);  // votes 1, 0, 1
    CHECK_FALSE(q.neuron_labels[1].has_value());
    CHECK(q.neuron_labels[2] == 0);  // votes 2, 0 tie, lowest class
    CHECK(q.neuron_labels[3] == 3);
    CHECK(label_neurons(d, m) == q.neuron_labels);

    const QualityReport unlabeled = evaluate(dataset({{0.0}, {5.0}}), m);
    CHECK(unlabeled.neuron_labels.empty());
}

TEST_CASE("majority labels agree with a vote count") {
    const Dataset d = testutil::corner_blobs(20, 0.2, 9);
    MapState m = build_lattice({3, 3, Topology::rectangular}, 2);
    init_weights(m, d, 4);
    std::vector<std::map<int, int>> votes(9);
    for (Index p = 0; p < d.size(); ++p) ++votes[std::size_t(nearest(m, d.pattern(p)))][d.labels()[std::size_t(p)]];
    const auto labels = label_neurons(d, m);
    for (std::size_t i = 0; i < 9; ++i) {
        if (votes[i].empty()) {
            CHECK_FALSE(labels[i].has_value());
            continue;
        }
        int best = -1, count = -1;
        for (const auto& [cls, n] : votes[i])
            if (n > count) best = cls, count = n;
        CHECK(labels[i] == best);
    }
}
