#include <doctest.h>

#include <filesystem>

#include "pflp/errors.hpp"
#include "pflp/io.hpp"
#include "pflp/json_io.hpp"
#include "support/oracles.hpp"

using namespace pflp;

namespace {

const char* kGeoJson = R"({
  "type": "FeatureCollection", "name": "towns",
  "features": [
    {"type": "Feature", "id": "a", "geometry": {"type": "Point", "coordinates": [16.37, 48.21]},
     "properties": {"name": "Wien", "weight": 2}},
    {"type": "Feature", "geometry": {"type": "LineString", "coordinates": [[0, 0], [1, 1]]},
     "properties": {"name": "road"}},
    {"type": "Feature", "geometry": {"type": "Point", "coordinates": [14.28, 48.30]},
     "properties": {"name": "Linz"}}
  ]})";

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("geojson points load, other geometry is skipped with a warning") {
    const auto r = parse_dataset(kGeoJson);
    CHECK(r.dataset.name == "towns");
    REQUIRE(r.dataset.features.size() == 2);
    CHECK(r.dataset.features[0].name == "Wien");
    CHECK(r.dataset.features[0].key == "a");
    CHECK(r.dataset.features[0].base_weight == 2.0);
    CHECK(r.dataset.features[1].id == FeatureId(1));
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0] == "record 1: skipped LineString geometry");
  }

  TEST_CASE("simple json") {
    const auto r = parse_dataset(R"({"zoom": 10, "position_model": 8,
        "features": [{"name": "Graz", "lon": 15.44, "lat": 47.07}]})");
    CHECK(r.dataset.zoom == 10);
    CHECK(r.dataset.position_model == PositionModel::Eight);
    CHECK(r.dataset.features.at(0).base_weight == 1.0);
  }

  TEST_CASE("rejected inputs") {
    CHECK_THROWS_WITH_AS(parse_dataset(R"({"features": [{"lon": 1, "lat": 2}]})"), "record 0: missing name",
                         InvalidInput);
    CHECK_THROWS_WITH_AS(parse_dataset(R"({"features": []})"), "empty dataset", InvalidInput);
    CHECK_THROWS_AS(parse_dataset(R"({"features": [)"), InvalidInput);
    CHECK_THROWS_AS(parse_dataset(R"({"features": [{"name": "x", "lon": 1, "lat": 89}]})"), InvalidInput);
    CHECK_THROWS_AS(parse_dataset(R"({"features": [{"name": "x", "lon": 1, "lat": 2, "weight": 0}]})"),
                    InvalidInput);
    CHECK_THROWS_AS(parse_dataset(kGeoJson, DatasetFormat::SimpleJson), InvalidInput);
  }

  TEST_CASE("dataset round trip") {
    const auto d = generate_grid_dataset(4, 5, 18, 4, 6, 3);
    const auto back = parse_dataset(dataset_to_json(d)).dataset;
    CHECK(back.name == d.name);
    CHECK(back.features == d.features);
  }

  TEST_CASE("grid generator") {
    const auto a = generate_grid_dataset(30, 30, 18, 4, 8, 1);
    CHECK(a.features.size() == 900);
    CHECK(a.features[0].name.size() == 8);
    CHECK(a.features == generate_grid_dataset(30, 30, 18, 4, 8, 1).features);
    CHECK(a.features != generate_grid_dataset(30, 30, 18, 4, 8, 2).features);
    // Neighbors sit one spacing apart, give or take the jitter.
    const Point p = project(a.features[0].lon, a.features[0].lat, 12);
    const Point q = project(a.features[1].lon, a.features[1].lat, 12);
    CHECK(std::hypot(q.x - p.x, q.y - p.y) == doctest::Approx(18).epsilon(0.7));
  }

  TEST_CASE("session snapshot round trip") {
    Rng rng(6);
    const auto d = testing::random_dataset(rng, 25, 200);
    Instance inst(d.features, instance_config(d));
    inst.apply_edit(SetFontSize{FeatureId(1), 14});
    inst.apply_edit(DeleteCandidate{inst.live_candidates_of(FeatureId(2)).front()});
    const CandidateId c = inst.live_candidates_of(FeatureId(3)).front();
    inst.apply_edit(DragCandidate{c, {inst.candidate(c).rect.x + 7, inst.candidate(c).rect.y}});
    const Labeling l = solve(inst.graph(), Algorithm::Greedy, {});

    const auto snap = snapshot_of("demo", inst, l);
    const auto text = session_to_json(snap);
    const auto back = session_from_json(text);
    Instance restored = restore_instance(back);
    CHECK(back.name == "demo");
    CHECK(back.labeling.selected == l.selected);
    CHECK(restored.graph() == inst.graph());
    CHECK(restored.undo_depth() == 3);
    restored.undo();
    inst.undo();
    CHECK(restored.graph() == inst.graph());

    const auto path = std::filesystem::temp_directory_path() / "pflp_session_test.json";
    save_session(path, snap);
    CHECK(load_session(path).candidates == snap.candidates);
    std::filesystem::remove(path);

    auto j = nlohmann::json::parse(text);
    j["schema_version"] = 99;
    CHECK_THROWS_AS(session_from_json(j.dump()), InvalidInput);
  }

  TEST_CASE("edit vocabulary") {
    using nlohmann::json;
    CHECK(std::holds_alternative<SetFontSize>(edit_from_json(json{{"kind", "set_font_size"}, {"feature", 1}, {"font_size", 12}})));
    const auto drag = edit_from_json(json{{"kind", "drag_candidate"}, {"candidate", 4}, {"x", 1.5}, {"y", 2}});
    REQUIRE(std::holds_alternative<DragCandidate>(drag));
    CHECK(std::get<DragCandidate>(drag).top_left == Point{1.5, 2});
    CHECK(edit_kind(drag) == "drag_candidate");
    CHECK_THROWS_AS(edit_from_json(json{{"kind", "explode"}}), InvalidInput);
    CHECK_THROWS_AS(edit_from_json(json{{"kind", "set_text"}, {"feature", 1}}), InvalidInput);
  }
}
