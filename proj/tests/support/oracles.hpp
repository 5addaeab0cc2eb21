#pragma once

// Brute-force references and instance generators shared by the unit tests and
// the acceptance binary. Everything here is exhaustive and only meant for
// small inputs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pflp/conflict_graph.hpp"
#include "pflp/edits.hpp"
#include "pflp/instance.hpp"
#include "pflp/io.hpp"
#include "pflp/pmaxsat.hpp"
#include "pflp/rng.hpp"

namespace pflp::testing {

struct BruteResult {
  double weight = 0.0;
  std::vector<CandidateId> selected;
};

// Maximum weight independent set over the live vertices. At most 30 vertices.
BruteResult brute_mwis(const ConflictGraph& graph);

// Among maximum-weight independent sets, the largest overlap with `previous`.
struct LexResult {
  double weight = 0.0;
  std::size_t overlap = 0;
};
LexResult brute_lexicographic(const ConflictGraph& graph, const std::vector<CandidateId>& previous);

// Maximum over assignments satisfying every hard clause of the summed soft
// clause weights; `assignment` is one maximizer. At most 24 variables.
struct MaxSatResult {
  bool feasible = false;
  std::int64_t soft_weight = 0;
  std::vector<bool> assignment;
};
MaxSatResult brute_maxsat(const Wcnf& wcnf);

// True when no live vertex outside `selected` is free of selected neighbors,
// checked vertex by vertex without using the library helper.
bool exhaustively_maximal(const ConflictGraph& graph, const std::vector<CandidateId>& selected);

// k / 4 for k in 1..16: exact in binary, so scaled weights stay integral.
double dyadic_weight(Rng& rng);

// Random conflict graph: vertices are grouped into features of 1..max_group
// candidates (cliques, as in a labeling instance), plus random cross edges.
ConflictGraph random_graph(Rng& rng, int vertices, double edge_prob, bool unit_weights, int max_group = 3);

// Random independent set built by a shuffled greedy pass.
std::vector<CandidateId> random_independent_set(Rng& rng, const ConflictGraph& graph);

// Points scattered uniformly over a square of `extent_px` pixels at `zoom`,
// with random names of 3..10 letters. Produces real label geometry.
Dataset random_dataset(Rng& rng, int features, double extent_px, int zoom = 12);

// Random edit on live targets of `instance`, drawn over every edit kind.
// Returns nullopt when nothing is live any more.
std::optional<Edit> random_edit(Rng& rng, const Instance& instance);

}  // namespace pflp::testing
