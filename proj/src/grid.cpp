#include "amsom/grid.hpp"

#include "amsom/error.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <optional>

namespace amsom {

std::string_view to_string(Topology t) { return t == Topology::rectangular ? "rectangular" : "hexagonal"; }

Topology parse_topology(std::string_view s) {
    if (s == "rectangular" || s == "rect") return Topology::rectangular;
    if (s == "hexagonal" || s == "hex") return Topology::hexagonal;
    throw ConfigError("unknown topology '" + std::string(s) + "'");
}

int target_neuron_count(Index patterns) {
    if (patterns < 1) throw ConfigError("pattern count must be positive");
    return static_cast<int>(std::lround(5.0 * std::sqrt(static_cast<double>(patterns))));
}

std::pair<double, double> leading_eigenvalues(const Dataset& data) {
    const RowMatrix& x = data.patterns();
    if (data.size() < 2) return {0.0, 0.0};
    const Eigen::RowVectorXd mean = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mean;
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(data.size() - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
    const Index d = ev.size();
    if (d < 2) return {ev(d - 1), 0.0};
    return {ev(d - 1), ev(d - 2)};
}

std::pair<int, int> side_lengths_for_ratio(double side_ratio, int target) {
    if (!(side_ratio >= 1.0) || !std::isfinite(side_ratio)) side_ratio = 1.0;
    target = std::max(target, 4);
    const double band = std::log(1.25);
    const double want = std::log(side_ratio);

    // Ranking: inside the tolerance band, |prod - target|, ratio error, prod,
    // then the squarer shape. Ratio errors within 1e-12 count as equal so that
    // mirror-image ratios such as 12:5 and 10:6 around 2 tie exactly.
    struct Score {
        int outside;
        int miss;
        double err;
        int prod;
        int rows;
    };
    const auto better = [](const Score& a, const Score& b) {
        if (a.outside != b.outside) return a.outside < b.outside;
        if (a.miss != b.miss) return a.miss < b.miss;
        if (std::abs(a.err - b.err) > 1e-12) return a.err < b.err;
        if (a.prod != b.prod) return a.prod < b.prod;
        return a.rows < b.rows;
    };
    std::optional<Score> best;
    std::pair<int, int> sides{2, 2};
    for (int cols = 2; cols * cols <= 2 * target; ++cols) {
        for (int rows = cols; rows * cols <= 2 * target; ++rows) {
            const int prod = rows * cols;
            const double err = std::abs(std::log(static_cast<double>(rows) / cols) - want);
            const Score score{err <= band + 1e-12 ? 0 : 1, std::abs(prod - target), err, prod, rows};
            if (!best || better(score, *best)) {
                best = score;
                sides = {rows, cols};
            }
        }
    }
    return sides;
}

std::pair<int, int> side_lengths(const Dataset& data, int target) {
    double eigen_ratio = 1.0;
    if (data.dim() >= 2 && data.size() >= 2) {
        const auto [l1, l2] = leading_eigenvalues(data);
        if (l1 > 0.0) eigen_ratio = (l2 > l1 / kMaxEigenRatio) ? l1 / l2 : kMaxEigenRatio;
    }
    return side_lengths_for_ratio(std::sqrt(eigen_ratio), target);
}

MapState build_lattice(const LatticeSpec& spec, Index dim) {
    if (spec.rows < 1 || spec.cols < 1 || spec.neurons() < 2)
        throw ConfigError("lattice must have at least two neurons");
    MapState map = MapState::empty(spec.neurons(), dim);
    const auto id = [&](int y, int x) { return static_cast<Index>(y) * spec.cols + x; };
    const bool hex = spec.topology == Topology::hexagonal;
    const double pitch = hex ? std::sqrt(3.0) / 2.0 : 1.0;

    for (int y = 0; y < spec.rows; ++y) {
        for (int x = 0; x < spec.cols; ++x) {
            const Index i = id(y, x);
            const double shift = (hex && (y % 2 == 1)) ? 0.5 : 0.0;
            map.positions(i, 0) = x + shift;
            map.positions(i, 1) = y * pitch;

            if (x + 1 < spec.cols) map.connect(i, id(y, x + 1));
            if (y + 1 < spec.rows) {
                map.connect(i, id(y + 1, x));
                if (hex) {
                    // Even rows reach down-left, odd rows (shifted right) down-right.
                    const int diag = (y % 2 == 0) ? x - 1 : x + 1;
                    if (diag >= 0 && diag < spec.cols) map.connect(i, id(y + 1, diag));
                }
            }
        }
    }
    return map;
}

void init_weights(MapState& map, const Dataset& data, std::uint64_t seed) {
    const Index dim = data.dim();
    const Eigen::RowVectorXd lo = data.patterns().colwise().minCoeff();
    const Eigen::RowVectorXd hi = data.patterns().colwise().maxCoeff();
    map.weights.resize(map.size(), dim);
    std::mt19937_64 rng(seed);
    for (Index i = 0; i < map.size(); ++i) {
        for (Index k = 0; k < dim; ++k) {
            if (hi(k) > lo(k)) {
                std::uniform_real_distribution<double> u(lo(k), hi(k));
                map.weights(i, k) = u(rng);
            } else {
                map.weights(i, k) = lo(k);
            }
        }
    }
}

double growing_threshold(Index dim, double spread_factor) {
    if (dim < 2) throw ConfigError("growing threshold needs feature dimension >= 2");
    if (!(spread_factor > 0.0 && spread_factor < 1.0)) throw ConfigError("spread factor must lie in (0, 1)");
    return -std::log(static_cast<double>(dim)) * std::log(spread_factor);
}

}  // namespace amsom
