#include <doctest.h>

#include <algorithm>

#include "pflp/candgen.hpp"
#include "pflp/errors.hpp"
#include "pflp/instance.hpp"
#include "support/oracles.hpp"

using namespace pflp;

namespace {

Instance random_instance(Rng& rng, int n, double extent, InstanceConfig cfg = {}) {
  const auto d = testing::random_dataset(rng, n, extent);
  cfg.zoom = d.zoom;
  return Instance(d.features, cfg);
}

// A single feature far away from the rest.
Instance lonely(PositionModel model = PositionModel::Four) {
  Rng rng(1);
  auto d = testing::random_dataset(rng, 1, 10);
  InstanceConfig cfg;
  cfg.model = model;
  return Instance(d.features, cfg);
}

}  // namespace

TEST_SUITE("edits") {
  TEST_CASE("deleting an isolated feature removes its clique") {
    Instance inst = lonely();
    const auto delta = inst.apply_edit(DeleteFeature{FeatureId(0)});
    CHECK(delta.removed_vertices.size() == 4);
    CHECK(delta.removed_edges.size() == 6);
    CHECK(inst.graph().num_vertices() == 0);
    CHECK(inst.live_feature_count() == 0);
    CHECK_THROWS_AS(inst.apply_edit(DeleteFeature{FeatureId(0)}), NotFound);
  }

  TEST_CASE("setting the current font size is a no-op") {
    Instance inst = lonely();
    const auto delta = inst.apply_edit(SetFontSize{FeatureId(0), inst.config().style.font_size});
    CHECK(delta.empty());
    CHECK(inst.undo_depth() == 0);
  }

  TEST_CASE("dragging a free label into empty space drops its cross-feature conflicts") {
    Rng rng(2);
    Instance inst = random_instance(rng, 30, 120);
    const CandidateId c = inst.live_candidates_of(FeatureId(0)).front();
    const Rect r = inst.candidate(c).rect;
    const auto first = inst.apply_edit(DragCandidate{c, {r.x + 3, r.y + 3}});
    REQUIRE(first.added_vertices.size() == 1);
    const CandidateId free_id = first.added_vertices.front().id;
    CHECK(inst.candidate(free_id).slot == Slot::Free);

    std::vector<Edge> cross;
    for (CandidateId n : inst.graph().neighbors(free_id)) {
      if (inst.candidate(n).feature != FeatureId(0)) cross.push_back(make_edge(free_id, n));
    }
    const auto second = inst.apply_edit(DragCandidate{free_id, {r.x + 5000, r.y + 5000}});
    auto removed = second.removed_edges;
    std::sort(removed.begin(), removed.end());
    std::sort(cross.begin(), cross.end());
    CHECK(removed == cross);
    CHECK(second.added_edges.empty());
    CHECK(inst.graph() == inst.rebuild_graph());
  }

  TEST_CASE("keep-fixed fixates dragged labels") {
    Instance inst = lonely();
    inst.set_keep_fixed(true);
    const CandidateId c = inst.live_candidates().front();
    const Rect r = inst.candidate(c).rect;
    const auto delta = inst.apply_edit(DragCandidate{c, {r.x + 30, r.y}});
    REQUIRE(delta.added_vertices.size() == 1);
    CHECK(inst.graph().vertex(delta.added_vertices.front().id).fixed);
  }

  TEST_CASE("undo restores the graph and the candidates") {
    Rng rng(3);
    Instance inst = random_instance(rng, 40, 200);
    const ConflictGraph g0 = inst.graph();
    const std::vector<LabelCandidate> c0(inst.candidates().begin(), inst.candidates().end());
    int applied = 0;
    for (int i = 0; i < 40; ++i) {
      const auto e = testing::random_edit(rng, inst);
      if (!e) break;
      try {
        if (!inst.apply_edit(*e).empty()) ++applied;
      } catch (const Error&) {
      }
    }
    CHECK(static_cast<int>(inst.undo_depth()) == applied);
    while (inst.undo_depth() > 0) inst.undo();
    CHECK(inst.graph() == g0);
    for (std::size_t i = 0; i < c0.size(); ++i) CHECK(inst.candidate(c0[i].id) == c0[i]);
    CHECK_THROWS_AS(inst.undo(), NothingToUndo);
  }

  TEST_CASE("incremental graph equals a rebuild after every edit") {
    Rng rng(4);
    for (int seq = 0; seq < 10; ++seq) {
      InstanceConfig cfg;
      cfg.model = seq % 2 ? PositionModel::Eight : PositionModel::Four;
      cfg.keep_fixed = seq % 3 == 0;
      Instance inst = random_instance(rng, 40, 250, cfg);
      for (int i = 0; i < 50; ++i) {
        if (inst.undo_depth() > 0 && rng.index(8) == 0) {
          inst.undo();
        } else {
          const auto e = testing::random_edit(rng, inst);
          if (!e) break;
          try {
            inst.apply_edit(*e);
          } catch (const Error&) {
          }
        }
        REQUIRE(inst.graph() == inst.rebuild_graph());
        inst.graph().check_invariants();
      }
    }
  }

  TEST_CASE("failed edits leave the instance untouched") {
    Instance inst = lonely();
    const ConflictGraph g0 = inst.graph();
    CHECK_THROWS_AS(inst.apply_edit(SetFontSize{FeatureId(0), -1}), InvalidInput);
    CHECK_THROWS_AS(inst.apply_edit(SetFontSize{FeatureId(0), 5000}), InvalidInput);
    CHECK_THROWS_AS(inst.apply_edit(SetText{FeatureId(0), ""}), InvalidInput);
    CHECK_THROWS_AS(inst.apply_edit(SetLineBreaks{FeatureId(0), 0}), InvalidInput);
    CHECK_THROWS_AS(inst.apply_edit(SetPadding{FeatureId(0), -2}), InvalidInput);
    CHECK_THROWS_AS(inst.apply_edit(SetCandidateWeight{CandidateId(0), 0}), InvalidInput);
    CHECK_THROWS_AS(inst.apply_edit(DragCandidate{CandidateId(0), {-10, 0}}), InvalidInput);
    CHECK_THROWS_AS(inst.apply_edit(FixateCandidate{CandidateId(99)}), NotFound);
    CHECK_THROWS_AS(inst.apply_edit(SetFontSize{FeatureId(7), 12}), NotFound);
    CHECK(inst.graph() == g0);
    CHECK(inst.undo_depth() == 0);
  }

  TEST_CASE("shrink precedence") {
    InstanceConfig cfg;
    cfg.shrink_precedence = true;
    Rng rng(1);
    Instance inst(testing::random_dataset(rng, 1, 10).features, cfg);
    const CandidateId c = inst.live_candidates().front();
    inst.apply_edit(SetFontSize{c, 20});
    CHECK(inst.candidate(c).style.font_size == 20);
    inst.apply_edit(SetFontSize{c, 5});
    CHECK(inst.candidate(c).shrunk);
    CHECK(inst.apply_edit(SetFontSize{c, 20}).empty());
    CHECK(inst.candidate(c).style.font_size == 5);
  }

  TEST_CASE("style edits apply to the whole feature") {
    Instance inst = lonely(PositionModel::Eight);
    const auto members = inst.live_candidates_of(FeatureId(0));
    inst.apply_edit(SetLineBreaks{members[3], 2});
    for (CandidateId c : members) CHECK(inst.candidate(c).style.text_lines == 2);
    inst.apply_edit(SetBoxVisibility{members[1], false});
    for (CandidateId c : members) CHECK_FALSE(inst.candidate(c).box_visible);
  }

  TEST_CASE("apply_delta is atomic and invertible") {
    Rng rng(5);
    Instance inst = random_instance(rng, 20, 150);
    const ConflictGraph g0 = inst.graph();
    const auto delta = inst.preview(SetFontSize{FeatureId(2), 25});
    ConflictGraph g = g0;
    apply_delta(g, delta);
    apply_delta(g, invert(delta));
    CHECK(g == g0);
    apply_delta(g, EditDelta{});
    CHECK(g == g0);

    EditDelta bad;
    bad.added_edges.push_back(make_edge(CandidateId(0), CandidateId(9999)));
    CHECK_THROWS_AS(apply_delta(g, bad), InvalidInput);
    CHECK(g == g0);
  }
}
