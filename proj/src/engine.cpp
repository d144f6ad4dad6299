#include "amsom/engine.hpp"

#include "amsom/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace amsom {

std::string_view to_string(BetaMode m) {
    switch (m) {
        case BetaMode::clamped_gaussian: return "clamped_gaussian";
        case BetaMode::gaussian: return "gaussian";
        case BetaMode::fixed: return "fixed";
    }
    return "?";
}

BetaMode parse_beta_mode(std::string_view s) {
    if (s == "clamped_gaussian") return BetaMode::clamped_gaussian;
    if (s == "gaussian") return BetaMode::gaussian;
    if (s == "fixed") return BetaMode::fixed;
    throw ConfigError("unknown beta mode '" + std::string(s) + "'");
}

std::string_view to_string(NeuronErrorMode m) { return m == NeuronErrorMode::mean ? "mean" : "sum"; }

NeuronErrorMode parse_neuron_error_mode(std::string_view s) {
    if (s == "mean") return NeuronErrorMode::mean;
    if (s == "sum") return NeuronErrorMode::sum;
    throw ConfigError("unknown neuron error mode '" + std::string(s) + "'");
}

std::string_view to_string(StructuralEvent::Kind k) {
    using K = StructuralEvent::Kind;
    switch (k) {
        case K::edge_pruned: return "edge_pruned";
        case K::edge_trimmed: return "edge_trimmed";
        case K::neuron_removed: return "neuron_removed";
        case K::neuron_split: return "neuron_split";
        case K::removal_floor: return "removal_floor";
    }
    return "?";
}

void TrainConfig::validate() const {
    const auto fail = [](const std::string& what) { throw ConfigError(what); };
    if (!(spread_factor > 0.0 && spread_factor < 1.0)) fail("spread_factor must lie in (0, 1)");
    if (!(gamma > 0.0)) fail("gamma must be positive");
    if (!(alpha_train > 0.0 && alpha_train < 1.0)) fail("alpha_train must lie in (0, 1)");
    if (!(alpha_smooth > 0.0 && alpha_smooth < 1.0)) fail("alpha_smooth must lie in (0, 1)");
    if (age_max < 1) fail("age_max must be >= 1");
    if (t_add < 1) fail("t_add must be >= 1");
    if (max_epochs < 1) fail("max_epochs must be >= 1");
    if (smooth_max_epochs < 1) fail("smooth_max_epochs must be >= 1");
    if (!(eps2 > 0.0 && eps2 < eps1)) fail("require 0 < eps2 < eps1");
    if (!(sigma_final > 0.0)) fail("sigma_final must be positive");
    if (sigma0 > 0.0 && sigma0 < sigma_final) fail("sigma0 must be >= sigma_final");
    if (q < 0) fail("q must be non-negative");
    if (!(beta_clamp > 0.0)) fail("beta_clamp must be positive");
}

double neighborhood_output(const Eigen::Vector2d& rj, const Eigen::Vector2d& ri, double sigma) {
    return std::exp(-(rj - ri).squaredNorm() / (sigma * sigma));
}

double neighborhood_input(std::span<const double> wj, std::span<const double> wi, double sigma, double gamma) {
    return std::exp(-squared_distance(wj, wi) / (gamma * sigma * sigma));
}

double sigma_at(int epoch, int max_epochs, double sigma0, double sigma_final) {
    if (max_epochs <= 0 || sigma0 <= sigma_final) return sigma_final;
    const double frac = std::clamp(static_cast<double>(epoch) / max_epochs, 0.0, 1.0);
    return sigma0 * std::pow(sigma_final / sigma0, frac);
}

double default_sigma0(const MapState& map) {
    if (map.size() == 0) return 1.0;
    const Eigen::RowVector2d lo = map.positions.colwise().minCoeff();
    const Eigen::RowVector2d hi = map.positions.colwise().maxCoeff();
    return ((hi - lo).maxCoeff() + 1.0) / 2.0;
}

std::vector<long> win_counts(const Assignment& assignment, Index neurons) {
    std::vector<long> n(static_cast<std::size_t>(neurons), 0);
    for (Index w : assignment.winner) ++n[static_cast<std::size_t>(w)];
    return n;
}

namespace {

bool in_scope(const MapState& map, NeighborhoodScope scope, Index j, Index i) {
    return scope == NeighborhoodScope::all || j == i || map.connected(j, i);
}

std::vector<Index> active_neurons(const std::vector<long>& counts) {
    std::vector<Index> out;
    for (std::size_t j = 0; j < counts.size(); ++j)
        if (counts[j] > 0) out.push_back(static_cast<Index>(j));
    return out;
}

}  // namespace

RowMatrix batch_weight_update(const MapState& map, const Assignment& assignment, const Dataset& data, double sigma,
                              NeighborhoodScope scope) {
    const Index m = map.size();
    const Index dim = map.dim();
    if (data.dim() != dim) throw_dimension_mismatch(data.dim(), dim);
    if (static_cast<Index>(assignment.size()) != data.size())
        throw DataError("assignment does not match the dataset");

    // Per-neuron pattern sums; n_j * xbar_j is just the sum.
    const std::vector<long> n = win_counts(assignment, m);
    RowMatrix sums = RowMatrix::Zero(m, dim);
    for (Index p = 0; p < data.size(); ++p) sums.row(assignment.winner[static_cast<std::size_t>(p)]) += data.pattern(p);
    const std::vector<Index> active = active_neurons(n);

    RowMatrix out = map.weights;
    Eigen::RowVectorXd num(dim);
    for (Index i = 0; i < m; ++i) {
        const Eigen::Vector2d ri = map.positions.row(i).transpose();
        num.setZero();
        double den = 0.0;
        for (Index j : active) {
            if (!in_scope(map, scope, j, i)) continue;
            const double h = neighborhood_output(map.positions.row(j).transpose(), ri, sigma);
            num += h * sums.row(j);
            den += h * static_cast<double>(n[static_cast<std::size_t>(j)]);
        }
        if (den > 0.0) out.row(i) = num / den;
    }
    return out;
}

Positions position_update(const MapState& map, const Assignment& assignment, double sigma, double alpha,
                          double gamma, NeighborhoodScope scope) {
    const Index m = map.size();
    const std::vector<long> n = win_counts(assignment, m);
    const std::vector<Index> active = active_neurons(n);
    const double scale = gamma * sigma * sigma;

    Positions out = map.positions;
    if (alpha == 0.0) return out;
    for (Index i = 0; i < m; ++i) {
        Eigen::RowVector2d num = Eigen::RowVector2d::Zero();
        double den = 0.0;
        for (Index j : active) {
            if (j == i || !in_scope(map, scope, j, i)) continue;
            const double delta = std::exp(-(map.weights.row(j) - map.weights.row(i)).squaredNorm() / scale);
            const double wgt = static_cast<double>(n[static_cast<std::size_t>(j)]) * delta;
            num += wgt * (map.positions.row(j) - map.positions.row(i));
            den += wgt;
        }
        if (den > 0.0) out.row(i) += alpha * (num / den);
    }
    return out;
}

double mean_edge_length(const MapState& map) {
    std::vector<double> lens;
    for (Index p = 0; p < map.size(); ++p)
        for (Index q = p + 1; q < map.size(); ++q)
            if (map.edges(p, q) != 0) lens.push_back((map.positions.row(p) - map.positions.row(q)).norm());
    if (lens.empty()) return 0.0;
    return std::accumulate(lens.begin(), lens.end(), 0.0) / static_cast<double>(lens.size());
}

void normalize_layout(MapState& map) {
    const double len = mean_edge_length(map);
    if (!(len > 0.0) || !std::isfinite(len)) return;
    const Eigen::RowVector2d center = map.positions.colwise().mean();
    map.positions = ((map.positions.rowwise() - center) / len).rowwise() + center;
}

void process_pattern_edges(MapState& map, Index winner, Index second) {
    if (winner == second) throw StructuralError("winner and second-best neuron coincide");
    if (winner < 0 || second < 0 || winner >= map.size() || second >= map.size())
        throw StructuralError("neuron index out of range");
    ++map.win_count[static_cast<std::size_t>(winner)];
    for (Index q = 0; q < map.size(); ++q) {
        if (map.edges(winner, q) != 0) {
            ++map.ages(winner, q);
            map.ages(q, winner) = map.ages(winner, q);
        }
    }
    map.connect(winner, second);
}

std::vector<StructuralEvent> remove_isolated_neurons(MapState& map) {
    std::vector<StructuralEvent> events;
    std::vector<Index> isolated;
    for (Index i = 0; i < map.size(); ++i)
        if (map.degree(i) == 0) isolated.push_back(i);
    if (isolated.empty()) return events;

    // A connected neuron always has a connected peer, so the survivor count is
    // either zero or at least two.
    if (map.size() - static_cast<Index>(isolated.size()) < 2) {
        std::vector<Index> order = isolated;
        std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
            return map.win_count[static_cast<std::size_t>(x)] > map.win_count[static_cast<std::size_t>(y)];
        });
        const Index keep_a = std::min(order[0], order[1]);
        const Index keep_b = std::max(order[0], order[1]);
        map.connect(keep_a, keep_b);
        events.push_back({StructuralEvent::Kind::removal_floor, keep_a, keep_b});
        std::erase_if(isolated, [&](Index i) { return i == keep_a || i == keep_b; });
    }
    for (Index i : isolated) events.push_back({StructuralEvent::Kind::neuron_removed, i});
    map.remove_neurons(isolated);
    return events;
}

std::vector<StructuralEvent> prune_edges_and_neurons(MapState& map, int age_max) {
    std::vector<StructuralEvent> events;
    for (Index p = 0; p < map.size(); ++p) {
        for (Index q = p + 1; q < map.size(); ++q) {
            if (map.edges(p, q) != 0 && map.ages(p, q) >= age_max) {
                map.disconnect(p, q);
                events.push_back({StructuralEvent::Kind::edge_pruned, p, q});
            }
        }
    }
    auto removed = remove_isolated_neurons(map);
    events.insert(events.end(), removed.begin(), removed.end());
    return events;
}

std::vector<std::optional<double>> neuron_errors(const Assignment& assignment, Index neurons, NeuronErrorMode mode) {
    std::vector<double> total(static_cast<std::size_t>(neurons), 0.0);
    std::vector<long> count(static_cast<std::size_t>(neurons), 0);
    for (std::size_t p = 0; p < assignment.size(); ++p) {
        const auto w = static_cast<std::size_t>(assignment.winner[p]);
        total[w] += std::sqrt(assignment.dist[p]);
        ++count[w];
    }
    std::vector<std::optional<double>> out(static_cast<std::size_t>(neurons));
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (count[i] == 0) continue;
        out[i] = mode == NeuronErrorMode::mean ? total[i] / static_cast<double>(count[i]) : total[i];
    }
    return out;
}

double draw_beta(const TrainConfig& config, std::mt19937_64& rng) {
    if (config.beta_mode == BetaMode::fixed) return config.beta_fixed;
    std::normal_distribution<double> normal(0.0, 1.0);
    const double beta = normal(rng);
    if (config.beta_mode == BetaMode::gaussian) return beta;
    return std::clamp(beta, -config.beta_clamp, config.beta_clamp);
}

std::optional<StructuralEvent> maybe_add_neuron(MapState& map, const std::vector<std::optional<double>>& errors,
                                                double threshold, int epochs_since_add, int t_add,
                                                const std::function<double()>& beta) {
    if (epochs_since_add < t_add) return std::nullopt;
    if (static_cast<Index>(errors.size()) != map.size()) throw StructuralError("error vector does not match map size");

    Index u = kNoNeuron;
    for (Index i = 0; i < map.size(); ++i) {
        const auto& e = errors[static_cast<std::size_t>(i)];
        if (e && (u == kNoNeuron || *e > *errors[static_cast<std::size_t>(u)])) u = i;
    }
    if (u == kNoNeuron || !(*errors[static_cast<std::size_t>(u)] > threshold)) return std::nullopt;

    const std::vector<Index> peers = map.neighbors(u);
    if (peers.empty()) throw StructuralError("neuron selected for division has no neighbours");
    Index v = kNoNeuron;
    for (Index q : peers) {
        const auto& e = errors[static_cast<std::size_t>(q)];
        if (e && (v == kNoNeuron || *e > *errors[static_cast<std::size_t>(v)])) v = q;
    }
    if (v == kNoNeuron) v = peers.front();

    const double b = beta();
    const Index m = map.size();
    const Eigen::RowVectorXd w_u = map.weights.row(u);
    const Eigen::RowVector2d r_u = map.positions.row(u);
    const Eigen::RowVector2d r_v = map.positions.row(v);

    map.weights.conservativeResize(m + 1, Eigen::NoChange);
    map.positions.conservativeResize(m + 1, Eigen::NoChange);
    IntMatrix edges = IntMatrix::Zero(m + 1, m + 1);
    edges.topLeftCorner(m, m) = map.edges;
    map.edges = std::move(edges);
    IntMatrix ages = IntMatrix::Zero(m + 1, m + 1);
    ages.topLeftCorner(m, m) = map.ages;
    map.ages = std::move(ages);
    map.win_count.push_back(0);

    const Index u2 = m;
    map.weights.row(u) = (1.0 + b) * w_u;
    map.weights.row(u2) = -b * w_u;
    map.positions.row(u) = r_u;
    map.positions.row(u2) = (r_u + r_v) / 2.0;
    map.win_count[static_cast<std::size_t>(u)] = 0;
    for (Index q : peers) {
        map.connect(u, q);
        map.connect(u2, q);
    }
    map.connect(u, u2);
    return StructuralEvent{StructuralEvent::Kind::neuron_split, u, u2, v};
}

std::vector<StructuralEvent> enforce_degree(MapState& map, int q) {
    std::vector<StructuralEvent> events;
    if (q < 1) throw ConfigError("degree limit must be positive");
    for (Index i = 0; i < map.size(); ++i) {
        std::vector<Index> peers = map.neighbors(i);
        if (static_cast<int>(peers.size()) <= q) continue;
        // neighbors() is index-ordered, so a stable sort breaks age ties by index.
        std::stable_sort(peers.begin(), peers.end(),
                         [&](Index x, Index y) { return map.ages(i, x) < map.ages(i, y); });
        for (std::size_t k = static_cast<std::size_t>(q); k < peers.size(); ++k) {
            map.disconnect(i, peers[k]);
            events.push_back({StructuralEvent::Kind::edge_trimmed, std::min(i, peers[k]), std::max(i, peers[k])});
        }
    }
    auto removed = remove_isolated_neurons(map);
    events.insert(events.end(), removed.begin(), removed.end());
    return events;
}

double mean_quantization_error(const Assignment& assignment) {
    if (assignment.size() == 0) throw DataError("no patterns to measure");
    double s = 0.0;
    for (double d : assignment.dist) s += std::sqrt(d);
    return s / static_cast<double>(assignment.size());
}

namespace {

void check_finite(double mqe, int epoch, const char* phase) {
    if (std::isfinite(mqe)) return;
    std::ostringstream msg;
    msg << phase << ": non-finite mean quantization error at epoch " << epoch;
    throw TrainingError(msg.str());
}

EpochReport finish_epoch(const Dataset& data, const MapState& map, int epoch, double sigma, NeuronErrorMode mode,
                         std::vector<StructuralEvent> events) {
    const Assignment end = assign_all(data, map);
    EpochReport rep;
    rep.epoch = epoch;
    rep.sigma = sigma;
    rep.mqe = mean_quantization_error(end);
    rep.neurons = map.size();
    rep.edges = map.edge_count();
    rep.neuron_qe = neuron_errors(end, map.size(), mode);
    rep.events = std::move(events);
    return rep;
}

}  // namespace

TrainResult train(const Dataset& data, MapState map, const TrainConfig& config, const EpochCallback& on_epoch) {
    config.validate();
    if (data.dim() != map.dim()) throw_dimension_mismatch(data.dim(), map.dim());
    if (map.size() < 2) throw StructuralError("training needs at least two neurons");
    const double threshold = growing_threshold(data.dim(), config.spread_factor);
    const double sigma0 = config.sigma0 > 0.0 ? config.sigma0 : std::max(default_sigma0(map), config.sigma_final);
    const int q = config.max_degree();

    // Seed stream distinct from the one init_weights uses.
    std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    const std::function<double()> beta = [&] { return draw_beta(config, rng); };

    TrainResult result;
    int epochs_since_add = 0;
    for (int t = 1; t <= config.max_epochs; ++t) {
        const double sigma = sigma_at(t, config.max_epochs, sigma0, config.sigma_final);
        ++epochs_since_add;

        // Winners against epoch-start weights; edge bookkeeping per presentation.
        const Assignment start = assign_all(data, map);
        for (std::size_t p = 0; p < start.size(); ++p) process_pattern_edges(map, start.winner[p], start.second[p]);

        map.weights = batch_weight_update(map, start, data, sigma);
        map.positions = position_update(map, start, sigma, config.alpha_train, config.gamma);
        if (config.normalize_layout) normalize_layout(map);

        std::vector<StructuralEvent> events = prune_edges_and_neurons(map, config.age_max);

        const auto errors = neuron_errors(assign_all(data, map), map.size(), config.neuron_error);
        if (auto split = maybe_add_neuron(map, errors, threshold, epochs_since_add, config.t_add, beta)) {
            events.push_back(*split);
            epochs_since_add = 0;
        }

        auto trimmed = enforce_degree(map, q);
        events.insert(events.end(), trimmed.begin(), trimmed.end());

        EpochReport rep = finish_epoch(data, map, t, sigma, config.neuron_error, std::move(events));
        check_finite(rep.mqe, t, "training");
        if (on_epoch) on_epoch(rep, map);
        const bool converged = !result.reports.empty() && std::abs(rep.mqe - result.reports.back().mqe) < config.eps1;
        result.reports.push_back(std::move(rep));
        if (converged) break;
    }
    result.map = std::move(map);
    return result;
}

TrainResult smooth(const Dataset& data, MapState map, const TrainConfig& config, const EpochCallback& on_epoch) {
    config.validate();
    if (data.dim() != map.dim()) throw_dimension_mismatch(data.dim(), map.dim());
    if (map.size() < 1) throw StructuralError("cannot smooth an empty map");
    const double sigma = config.sigma_final;

    TrainResult result;
    for (int t = 1; t <= config.smooth_max_epochs; ++t) {
        const Assignment start = assign_all(data, map);
        map.weights = batch_weight_update(map, start, data, sigma, NeighborhoodScope::graph);
        map.positions = position_update(map, start, sigma, config.alpha_smooth, config.gamma, NeighborhoodScope::graph);
        if (config.normalize_layout) normalize_layout(map);

        EpochReport rep = finish_epoch(data, map, t, sigma, config.neuron_error, {});
        check_finite(rep.mqe, t, "smoothing");
        if (on_epoch) on_epoch(rep, map);
        const bool converged = !result.reports.empty() && std::abs(rep.mqe - result.reports.back().mqe) < config.eps2;
        result.reports.push_back(std::move(rep));
        if (converged) break;
    }
    result.map = std::move(map);
    return result;
}

}  // namespace amsom
