#pragma once

// Frozen maps on disk: a versioned JSON document and an SVG drawing of the
// neuron layout.

#include "amsom/core.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace amsom {

inline constexpr int kSnapshotVersion = 1;

struct MapSnapshot {
    MapState map;
    /// Majority-vote class per neuron; empty when the data carried no labels.
    std::vector<std::optional<int>> labels;
    /// Patterns won per neuron in the final evaluation; zero marks a dead unit.
    std::vector<long> hits;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
};

/// Snapshot of `map` evaluated on `data`: fills hits and, when the data has
/// labels, the majority-vote neuron labels.
[[nodiscard]] MapSnapshot make_snapshot(const MapState& map, const Dataset& data);

[[nodiscard]] nlohmann::ordered_json to_json(const MapSnapshot& snap);
/// Throws DataError on a malformed or unsupported document.
[[nodiscard]] MapSnapshot snapshot_from_json(const nlohmann::json& doc);

void export_snapshot_json(const MapSnapshot& snap, const std::filesystem::path& path);
[[nodiscard]] MapSnapshot load_snapshot_json(const std::filesystem::path& path);

struct SvgOptions {
    int width = 800;
    int height = 800;
    int margin = 40;
    double radius = 7.0;
};

/// Edges as line segments, neurons as circles filled by class; dead units are
/// drawn hollow.
[[nodiscard]] std::string svg_document(const MapSnapshot& snap, const SvgOptions& options = {});
void render_svg(const MapSnapshot& snap, const std::filesystem::path& path, const SvgOptions& options = {});

}  // namespace amsom
