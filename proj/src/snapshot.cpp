#include "amsom/snapshot.hpp"

#include "amsom/error.hpp"
#include "amsom/engine.hpp"
#include "amsom/metrics.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace amsom {

using ojson = nlohmann::ordered_json;

MapSnapshot make_snapshot(const MapState& map, const Dataset& data) {
    MapSnapshot snap;
    snap.map = map;
    snap.hits = win_counts(assign_all(data, map), map.size());
    if (data.has_labels()) snap.labels = label_neurons(data, map);
    return snap;
}

ojson to_json(const MapSnapshot& snap) {
    const MapState& m = snap.map;
    ojson doc;
    doc["format"] = "amsom-snapshot";
    doc["version"] = kSnapshotVersion;
    doc["neurons"] = m.size();
    doc["dim"] = m.dim();

    ojson weights = ojson::array();
    ojson positions = ojson::array();
    for (Index i = 0; i < m.size(); ++i) {
        ojson row = ojson::array();
        for (Index k = 0; k < m.dim(); ++k) row.push_back(m.weights(i, k));
        weights.push_back(std::move(row));
        positions.push_back({m.positions(i, 0), m.positions(i, 1)});
    }
    doc["weights"] = std::move(weights);
    doc["positions"] = std::move(positions);

    ojson edges = ojson::array();
    for (Index p = 0; p < m.size(); ++p)
        for (Index q = p + 1; q < m.size(); ++q)
            if (m.edges(p, q) != 0) edges.push_back({p, q, m.ages(p, q)});
    doc["edges"] = std::move(edges);

    doc["win_counts"] = m.win_count;
    doc["hits"] = snap.hits;
    ojson labels = ojson::array();
    for (const auto& l : snap.labels) labels.push_back(l ? ojson(*l) : ojson(nullptr));
    doc["labels"] = std::move(labels);
    doc["config"] = snap.config;
    doc["metrics"] = snap.metrics;
    return doc;
}

MapSnapshot snapshot_from_json(const nlohmann::json& doc) {
    try {
        if (doc.at("format").get<std::string>() != "amsom-snapshot") throw DataError("not an amsom snapshot");
        const int version = doc.at("version").get<int>();
        if (version != kSnapshotVersion) throw DataError("unsupported snapshot version " + std::to_string(version));

        const auto m = doc.at("neurons").get<Index>();
        const auto dim = doc.at("dim").get<Index>();
        MapSnapshot snap;
        snap.map = MapState::empty(m, dim);
        const auto& weights = doc.at("weights");
        const auto& positions = doc.at("positions");
        if (static_cast<Index>(weights.size()) != m || static_cast<Index>(positions.size()) != m)
            throw DataError("snapshot weight/position count does not match neuron count");
        for (Index i = 0; i < m; ++i) {
            const auto& w = weights.at(static_cast<std::size_t>(i));
            if (static_cast<Index>(w.size()) != dim) throw DataError("snapshot weight row has wrong dimension");
            for (Index k = 0; k < dim; ++k) snap.map.weights(i, k) = w.at(static_cast<std::size_t>(k)).get<double>();
            const auto& r = positions.at(static_cast<std::size_t>(i));
            snap.map.positions(i, 0) = r.at(0).get<double>();
            snap.map.positions(i, 1) = r.at(1).get<double>();
        }
        for (const auto& e : doc.at("edges")) {
            const auto p = e.at(0).get<Index>();
            const auto q = e.at(1).get<Index>();
            if (p < 0 || q < 0 || p >= m || q >= m || p == q) throw DataError("snapshot edge out of range");
            snap.map.connect(p, q);
            snap.map.ages(p, q) = snap.map.ages(q, p) = e.at(2).get<int>();
        }
        snap.map.win_count = doc.at("win_counts").get<std::vector<long>>();
        if (static_cast<Index>(snap.map.win_count.size()) != m) throw DataError("snapshot win_counts has wrong length");
        snap.hits = doc.value("hits", std::vector<long>{});
        if (doc.contains("labels")) {
            for (const auto& l : doc.at("labels")) {
                snap.labels.push_back(l.is_null() ? std::nullopt : std::optional<int>(l.get<int>()));
            }
        }
        if (doc.contains("config")) snap.config = ojson::parse(doc.at("config").dump());
        if (doc.contains("metrics")) snap.metrics = ojson::parse(doc.at("metrics").dump());
        return snap;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed snapshot: ") + e.what());
    }
}

void export_snapshot_json(const MapSnapshot& snap, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << to_json(snap).dump(2) << '\n';
    if (!out) throw Error("failed writing " + path.string());
}

MapSnapshot load_snapshot_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return snapshot_from_json(doc);
}

namespace {

// Tableau-style qualitative palette.
constexpr std::array<const char*, 10> kPalette{"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                              "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

std::string fmt(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v;
    return s.str();
}

}  // namespace

std::string svg_document(const MapSnapshot& snap, const SvgOptions& options) {
    const MapState& m = snap.map;
    const double inner_w = options.width - 2.0 * options.margin;
    const double inner_h = options.height - 2.0 * options.margin;

    Eigen::RowVector2d lo = Eigen::RowVector2d::Zero();
    Eigen::RowVector2d hi = Eigen::RowVector2d::Ones();
    if (m.size() > 0) {
        lo = m.positions.colwise().minCoeff();
        hi = m.positions.colwise().maxCoeff();
    }
    const double span = std::max({hi(0) - lo(0), hi(1) - lo(1), 1e-12});
    const double scale = std::min(inner_w, inner_h) / span;
    // Output-space y grows upwards.
    const auto x_of = [&](Index i) { return options.margin + (m.positions(i, 0) - lo(0)) * scale; };
    const auto y_of = [&](Index i) { return options.height - options.margin - (m.positions(i, 1) - lo(1)) * scale; };

    std::ostringstream svg;
    svg << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << options.width << R"(" height=")" << options.height
        << R"(" viewBox="0 0 )" << options.width << ' ' << options.height << R"(">)" << '\n';
    svg << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
    svg << R"(<g stroke="#888888" stroke-width="1.5">)" << '\n';
    for (Index p = 0; p < m.size(); ++p) {
        for (Index q = p + 1; q < m.size(); ++q) {
            if (m.edges(p, q) == 0) continue;
            svg << R"(<line x1=")" << fmt(x_of(p)) << R"(" y1=")" << fmt(y_of(p)) << R"(" x2=")" << fmt(x_of(q))
                << R"(" y2=")" << fmt(y_of(q)) << R"("/>)" << '\n';
        }
    }
    svg << "</g>\n<g stroke-width=\"2\">\n";
    for (Index i = 0; i < m.size(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        const bool dead = k < snap.hits.size() && snap.hits[k] == 0;
        std::string color = "#333333";
        if (k < snap.labels.size() && snap.labels[k]) {
            const int cls = *snap.labels[k];
            color = kPalette[static_cast<std::size_t>(((cls % 10) + 10) % 10)];
        }
        svg << R"(<circle cx=")" << fmt(x_of(i)) << R"(" cy=")" << fmt(y_of(i)) << R"(" r=")" << fmt(options.radius)
            << R"(" stroke=")" << color << R"(" fill=")" << (dead ? "none" : color) << R"("/>)" << '\n';
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

void render_svg(const MapSnapshot& snap, const std::filesystem::path& path, const SvgOptions& options) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << svg_document(snap, options);
    if (!out) throw Error("failed writing " + path.string());
}

}  // namespace amsom
