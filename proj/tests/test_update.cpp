#include <doctest.h>

#include <algorithm>

#include "pflp/errors.hpp"
#include "pflp/update.hpp"
#include "support/oracles.hpp"

using namespace pflp;

namespace {

CandidateId C(std::uint32_t v) { return CandidateId(v); }

ConflictGraph graph_of(std::vector<double> w, std::vector<std::pair<int, int>> edges) {
  ConflictGraph g;
  for (std::uint32_t v = 0; v < w.size(); ++v) g.add_vertex(C(v), {FeatureId(v), Slot::AboveRight, w[v], false});
  for (auto [a, b] : edges) g.add_edge(C(a), C(b));
  return g;
}

Labeling sel(std::initializer_list<std::uint32_t> v) {
  Labeling l;
  for (auto x : v) l.selected.push_back(C(x));
  return l;
}

std::size_t overlap(const Labeling& a, const std::vector<CandidateId>& b) {
  return static_cast<std::size_t>(std::count_if(a.selected.begin(), a.selected.end(), [&](CandidateId v) {
    return std::find(b.begin(), b.end(), v) != b.end();
  }));
}

}  // namespace

TEST_SUITE("update") {
  TEST_CASE("stability ratio") {
    CHECK(stability(sel({1, 2}), sel({1, 2})).ratio == 1.0);
    const auto r = stability(sel({1, 2}), sel({2, 3}));
    CHECK(r.ratio == doctest::Approx(1.0 / 3.0));
    CHECK(r.kept == 1);
    CHECK(r.added == 1);
    CHECK(r.dropped == 1);
    CHECK(stability(sel({1}), sel({2})).ratio == 0.0);
    CHECK(stability(sel({}), sel({})).ratio == 1.0);
  }

  TEST_CASE("boosting") {
    const auto g = graph_of({1, 1, 1}, {{0, 1}});
    const auto b = boost_weights(g, sel({0}), UpdateParams{1.0, false});
    CHECK(b.weight(C(0)) == 2.0);
    CHECK(b.weight(C(1)) == 1.0);
    CHECK(b.weight(C(2)) == 1.0);
    CHECK(boost_weights(g, sel({0}), UpdateParams{0.0, false}) == g);
    CHECK_THROWS_AS(boost_weights(g, sel({0}), UpdateParams{-1.0, false}), InvalidInput);
    const double eps = effective_epsilon(UpdateParams{1.0, true}, 10);
    CHECK(eps == doctest::Approx(0.05));
    CHECK(eps > 0.0);
    CHECK(eps < 0.1);
  }

  TEST_CASE("no-op update keeps an exact solution") {
    Rng rng(77);
    for (int i = 0; i < 30; ++i) {
      const auto g = testing::random_graph(rng, 18, 0.2, i % 2 == 0);
      const auto initial = solve_exact(g, {});
      const auto r = update_labeling(g, initial, Algorithm::Exact, UpdateParams{});
      CHECK(r.report.ratio == 1.0);
      CHECK(r.labeling.selected == initial.selected);
    }
  }

  TEST_CASE("exact update maximizes the boosted objective") {
    Rng rng(78);
    for (int i = 0; i < 40; ++i) {
      const auto g = testing::random_graph(rng, 8 + static_cast<int>(rng.index(11)), 0.25, false);
      Labeling prev;
      prev.selected = testing::random_independent_set(rng, g);
      const double eps = static_cast<double>(rng.index(5)) / 4.0;
      const UpdateParams params{eps, false};
      const auto boosted = boost_weights(g, prev, params);
      const auto want = testing::brute_mwis(boosted);
      const auto r = update_labeling(g, prev, Algorithm::Exact, params);
      CHECK(validate_labeling(g, r.labeling).empty());
      CHECK(labeling_weight(boosted, r.labeling) == want.weight);
      CHECK(r.labeling.total_weight == labeling_weight(g, r.labeling));
    }
  }

  TEST_CASE("strict mode is lexicographic: weight, then overlap") {
    Rng rng(79);
    for (int i = 0; i < 40; ++i) {
      const auto g = testing::random_graph(rng, 6 + static_cast<int>(rng.index(11)), 0.3, true);
      const auto prev = testing::random_independent_set(rng, g);
      Labeling p;
      p.selected = prev;
      const auto want = testing::brute_lexicographic(g, prev);
      const auto r = update_labeling(g, p, Algorithm::Exact, UpdateParams{1.0, true});
      CHECK(r.labeling.total_weight == want.weight);
      CHECK(overlap(r.labeling, prev) == want.overlap);
    }
  }

  TEST_CASE("deleted previous label is dropped, the other kept") {
    auto g = graph_of({1, 1, 1}, {{1, 2}});
    const Labeling prev = make_labeling(g, {C(0), C(1)});
    g.remove_vertex(C(1));
    const auto r = update_labeling(g, prev, Algorithm::Exact, UpdateParams{});
    CHECK(r.report.dropped >= 1);
    CHECK(r.labeling.contains(C(0)));
  }

  TEST_CASE("empty previous behaves like an initial solve") {
    const auto g = graph_of({1, 2, 1}, {{0, 1}, {1, 2}});
    const auto r = update_labeling(g, Labeling{}, Algorithm::Exact, UpdateParams{});
    CHECK(r.labeling.total_weight == 2);
    CHECK(r.report.ratio == 0.0);
  }

  TEST_CASE("fixations") {
    auto g = graph_of({1, 5, 1}, {{0, 1}, {1, 2}});
    g.set_fixed(C(0), true);
    for (auto a : {Algorithm::Greedy, Algorithm::Mis, Algorithm::Falp, Algorithm::Chain, Algorithm::Popmusic,
                   Algorithm::Exact}) {
      const auto r = update_labeling(g, Labeling{}, a, UpdateParams{});
      CHECK(r.labeling.contains(C(0)));
      CHECK(validate_labeling(g, r.labeling).empty());
    }
    g.set_fixed(C(1), true);
    try {
      update_labeling(g, Labeling{}, Algorithm::Exact, UpdateParams{});
      FAIL("expected a fixation conflict");
    } catch (const FixationConflict& e) {
      CHECK(e.first() == C(0));
      CHECK(e.second() == C(1));
    }
  }

  TEST_CASE("greedy update keeps the conflict-free part of the old solution") {
    // 0-1 became a conflict; the heavier old label survives.
    const auto g = graph_of({1, 2, 1, 1}, {{0, 1}, {2, 3}});
    const Labeling prev = sel({0, 1, 3});
    const auto r = update_labeling(g, prev, Algorithm::Greedy, UpdateParams{});
    CHECK(r.labeling.selected == std::vector<CandidateId>{C(1), C(3)});
    CHECK(r.report.kept == 2);
  }
}
