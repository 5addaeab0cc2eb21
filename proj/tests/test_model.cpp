#include <doctest.h>

#include "pflp/conflict_graph.hpp"
#include "pflp/errors.hpp"
#include "support/oracles.hpp"

using namespace pflp;

namespace {

CandidateId C(std::uint32_t v) { return CandidateId(v); }

ConflictGraph path3() {
  ConflictGraph g;
  for (std::uint32_t v = 0; v < 3; ++v) g.add_vertex(C(v), {FeatureId(v), Slot::AboveRight, 1.0, false});
  g.add_edge(C(0), C(1));
  g.add_edge(C(1), C(2));
  return g;
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("empty labeling is valid") {
    const auto g = path3();
    CHECK(validate_labeling(g, Labeling{}).empty());
  }

  TEST_CASE("both ends of a conflict edge give one violation") {
    const auto g = path3();
    const auto v = validate_labeling(g, make_labeling(g, {C(0), C(1)}));
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::Conflict);
  }

  TEST_CASE("two candidates of one feature give one violation") {
    ConflictGraph g;
    g.add_vertex(C(0), {FeatureId(0), Slot::AboveRight, 1.0, false});
    g.add_vertex(C(1), {FeatureId(0), Slot::AboveLeft, 1.0, false});
    Labeling l;
    l.selected = {C(0), C(1)};
    l.total_weight = 2.0;
    const auto v = validate_labeling(g, l);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::SameFeature);
  }

  TEST_CASE("unknown ids are reported, not thrown") {
    const auto g = path3();
    Labeling l;
    l.selected = {C(7)};
    const auto v = validate_labeling(g, l);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::UnknownCandidate);
  }

  TEST_CASE("make_labeling sorts and sums") {
    const auto g = path3();
    const auto l = make_labeling(g, {C(2), C(0)});
    CHECK(l.selected == std::vector<CandidateId>{C(0), C(2)});
    CHECK(l.total_weight == 2.0);
    CHECK(labeling_weight(g, l) == 2.0);
    CHECK_THROWS_AS(make_labeling(g, {C(9)}), NotFound);
  }

  TEST_CASE("edge and vertex bookkeeping") {
    auto g = path3();
    CHECK(g.num_edges() == 2);
    CHECK_FALSE(g.add_edge(C(1), C(0)));
    CHECK(g.has_edge(C(1), C(0)));
    g.remove_vertex(C(1));
    CHECK(g.num_edges() == 0);
    CHECK(g.num_vertices() == 2);
    CHECK_FALSE(g.contains(C(1)));
    g.check_invariants();
  }

  TEST_CASE("random graphs keep their invariants") {
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
      auto g = testing::random_graph(rng, 30, 0.2, false);
      g.check_invariants();
      for (CandidateId a : g.vertices()) {
        for (CandidateId b : g.neighbors(a)) CHECK(g.has_edge(b, a));
      }
    }
  }

  TEST_CASE("slot names round trip") {
    for (int s = 0; s <= static_cast<int>(Slot::Free); ++s) {
      const auto slot = static_cast<Slot>(s);
      CHECK(parse_slot(to_string(slot)) == slot);
    }
    CHECK_FALSE(parse_slot("middle").has_value());
  }
}
