#pragma once

#include <cstddef>

#include "pflp/conflict_graph.hpp"
#include "pflp/solvers.hpp"

namespace pflp {

struct StabilityReport {
  double ratio = 1.0;  // |S ∩ S'| / |S ∪ S'|, 1 for two empty sets
  std::size_t kept = 0;
  std::size_t added = 0;
  std::size_t dropped = 0;
};

StabilityReport stability(const Labeling& before, const Labeling& after);

// Epsilon actually used: params.epsilon, or 1 / (2 max(1, previous_size)) in
// strict mode.
double effective_epsilon(const UpdateParams& params, std::size_t previous_size);

// Copy of `graph` with every live vertex of `previous` made heavier by epsilon.
ConflictGraph boost_weights(const ConflictGraph& graph, const Labeling& previous, const UpdateParams& params);

struct UpdateResult {
  Labeling labeling;  // weights are the unboosted ones
  StabilityReport report;
};

// Re-solves after edits. Fixated vertices are always part of the result; a
// conflicting pair of them throws FixationConflict before any solving.
UpdateResult update_labeling(const ConflictGraph& graph, const Labeling& previous, Algorithm algorithm,
                             const UpdateParams& params, const SolverOptions& options = {});

}  // namespace pflp
