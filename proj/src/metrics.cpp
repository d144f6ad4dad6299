#include "amsom/metrics.hpp"

#include "amsom/error.hpp"

#include <cmath>
#include <map>

namespace amsom {

namespace {

double qe_of(const Assignment& a) {
    double s = 0.0;
    for (double d : a.dist) s += std::sqrt(d);
    return s / static_cast<double>(a.size());
}

double te_of(const Assignment& a, const MapState& map) {
    long broken = 0;
    for (std::size_t p = 0; p < a.size(); ++p)
        if (!map.connected(a.winner[p], a.second[p])) ++broken;
    return static_cast<double>(broken) / static_cast<double>(a.size());
}

Index dead_of(const Assignment& a, Index neurons) {
    std::vector<bool> hit(static_cast<std::size_t>(neurons), false);
    for (Index w : a.winner) hit[static_cast<std::size_t>(w)] = true;
    Index dead = 0;
    for (bool h : hit)
        if (!h) ++dead;
    return dead;
}

std::vector<std::optional<int>> labels_of(const Assignment& a, const std::vector<int>& labels, Index neurons) {
    std::vector<std::map<int, long>> votes(static_cast<std::size_t>(neurons));
    for (std::size_t p = 0; p < a.size(); ++p) ++votes[static_cast<std::size_t>(a.winner[p])][labels[p]];
    std::vector<std::optional<int>> out(static_cast<std::size_t>(neurons));
    for (std::size_t i = 0; i < votes.size(); ++i) {
        long best = 0;
        // std::map iterates ascending, so strict > keeps the lowest class on ties.
        for (const auto& [cls, count] : votes[i]) {
            if (count > best) {
                best = count;
                out[i] = cls;
            }
        }
    }
    return out;
}

void require_patterns(const Dataset& data) {
    if (data.size() < 1) throw DataError("quality measures need at least one pattern");
}

}  // namespace

double quantization_error(const Dataset& data, const MapState& map) {
    require_patterns(data);
    return qe_of(assign_all(data, map));
}

double topographic_error(const Dataset& data, const MapState& map) {
    require_patterns(data);
    if (map.size() < 2) throw StructuralError("topographic error needs at least two neurons");
    return te_of(assign_all(data, map), map);
}

Index dead_unit_count(const Dataset& data, const MapState& map) { return dead_of(assign_all(data, map), map.size()); }

std::vector<std::optional<int>> label_neurons(const Dataset& data, const MapState& map) {
    const auto& labels = data.labels();
    return labels_of(assign_all(data, map), labels, map.size());
}

QualityReport evaluate(const Dataset& data, const MapState& map) {
    require_patterns(data);
    if (map.size() < 2) throw StructuralError("quality report needs at least two neurons");
    const Assignment a = assign_all(data, map);
    QualityReport r;
    r.qe = qe_of(a);
    r.te = te_of(a, map);
    r.neurons = map.size();
    r.dead_units = dead_of(a, map.size());
    r.dead_fraction = static_cast<double>(r.dead_units) / static_cast<double>(map.size());
    if (data.has_labels()) r.neuron_labels = labels_of(a, data.labels(), map.size());
    return r;
}

}  // namespace amsom
