#include "amsom/error.hpp"
#include "amsom/grid.hpp"
#include "amsom/snapshot.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace amsom;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
    return n;
}

MapSnapshot sample() {
    const Dataset d = testutil::corner_blobs(5, 0.05, 2);
    MapState m = build_lattice({2, 3, Topology::rectangular}, 2);
    init_weights(m, d, 1);
    m.ages(0, 1) = m.ages(1, 0) = 7;
    m.win_count = {1, 2, 3, 4, 5, 6};
    MapSnapshot s = make_snapshot(m, d);
    s.config["model"] = "amsom";
    s.metrics["qe"] = 0.125;
    return s;
}

}  // namespace

TEST_CASE("make_snapshot counts hits and labels") {
    const MapSnapshot s = sample();
    long hits = 0;
    for (long h : s.hits) hits += h;
    CHECK(hits == 20);
    CHECK(s.labels.size() == 6);
    const MapSnapshot unlabeled = make_snapshot(s.map, testutil::dataset({{0, 0}, {1, 1}}));
    CHECK(unlabeled.labels.empty());
}

TEST_CASE("snapshot JSON round trip") {
    const MapSnapshot s = sample();
    const testutil::TempDir dir("snap");
    export_snapshot_json(s, dir.path() / "m.json");
    const MapSnapshot back = load_snapshot_json(dir.path() / "m.json");
    CHECK(back.map.weights == s.map.weights);
    CHECK(back.map.positions == s.map.positions);
    CHECK(back.map.edges == s.map.edges);
    CHECK(back.map.ages == s.map.ages);
    CHECK(back.map.win_count == s.map.win_count);
    CHECK(back.hits == s.hits);
    CHECK(back.labels == s.labels);
    CHECK(back.config == s.config);
    CHECK(back.metrics == s.metrics);
    CHECK(to_json(back).dump() == to_json(s).dump());
}

TEST_CASE("malformed snapshots are data errors") {
    auto doc = nlohmann::json::parse(to_json(sample()).dump());
    SUBCASE("wrong format tag") { doc["format"] = "other"; }
    SUBCASE("future version") { doc["version"] = kSnapshotVersion + 1; }
    SUBCASE("missing weights") { doc.erase("weights"); }
    SUBCASE("edge out of range") { doc["edges"].push_back({0, 99, 0}); }
    CHECK_THROWS_AS((void)snapshot_from_json(doc), DataError);

    const testutil::TempDir dir("bad");
    CHECK_THROWS_AS((void)load_snapshot_json(dir.write("x.json", "{not json")), DataError);
    CHECK_THROWS_AS((void)load_snapshot_json(dir.path() / "missing.json"), DataError);
}

TEST_CASE("SVG of a 2x2 lattice") {
    const Dataset d = testutil::corner_blobs(3, 0.05, 4);
    MapState m = build_lattice({2, 2, Topology::rectangular}, 2);
    init_weights(m, d, 3);
    const std::string svg = svg_document(make_snapshot(m, d));
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(count_of(svg, "<circle") == 4);
    CHECK(count_of(svg, "<line") == 4);
    CHECK(svg.find("</svg>") != std::string::npos);

    const testutil::TempDir dir("svg");
    render_svg(make_snapshot(m, d), dir.path() / "m.svg");
    std::ifstream in(dir.path() / "m.svg");
    const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(written == svg);
}
