#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pflp/conflict_graph.hpp"

namespace pflp {

enum class Algorithm { Greedy, Mis, Falp, Chain, Popmusic, Exact };

std::string_view to_string(Algorithm a);
// Accepts the lowercase names; "mhs" is an alias for the exact solver.
std::optional<Algorithm> parse_algorithm(std::string_view name);

// Reports completion in [0, 1]; may be called from the solving thread only.
using ProgressFn = std::function<void(double)>;

struct ChainParams {
  int max_chain_length = 8;
  // nullopt means 50 iterations per feature.
  std::optional<std::size_t> iteration_budget;
  std::uint64_t rng_seed = 0;
};

struct PopmusicParams {
  ChainParams chain;
  int subpart_label_bound = 40;
  int tabu_tenure = 10;
  ProgressFn progress;
};

struct ExactParams {
  double time_limit = 10.0;  // seconds
  std::int64_t weight_scale = 1'000'000;
  // Optional incumbent, thinned to an independent set of live vertices.
  std::vector<CandidateId> warm_start;
  // Among equally heavy solutions, return one sharing the most vertices with
  // the warm start.
  bool prefer_warm_start = true;
  // Seed the incumbent with a POPMUSIC run before branching.
  bool heuristic_warm_start = true;
  // Improve the incumbent by re-solving windows of about `window_labels`
  // candidates exactly, for at most `window_share` of the time limit.
  bool window_search = true;
  std::size_t window_labels = 80;
  double window_share = 0.5;
  ProgressFn progress;
};

struct SolverOptions {
  std::uint64_t seed = 0;
  ChainParams chain;
  PopmusicParams popmusic;
  ExactParams exact;
};

// Maximal independent set by repeated maximum-weight picks, ties broken
// uniformly at random from `seed`. Every preset vertex is kept; a preset that
// is not independent throws PresetConflict.
Labeling solve_greedy(const ConflictGraph& graph, std::span<const CandidateId> preset,
                      std::uint64_t seed);

// Complement of a greedy minimal vertex cover built by smallest w(u)/deg(u).
Labeling solve_mis(const ConflictGraph& graph);

// Fewest-conflicts-first greedy with slot preference tie-breaking.
Labeling solve_falp(const ConflictGraph& graph);

// Chained-move local search from `initial`; never returns a lighter labeling.
Labeling solve_chain(const ConflictGraph& graph, const Labeling& initial, const ChainParams& params);

// POPMUSIC decomposition with tabu-guarded chains, starting from FALP.
Labeling solve_popmusic(const ConflictGraph& graph, const PopmusicParams& params);

// Maximum weight independent set by branch and reduce. `proven_optimal` is
// false when the time limit stopped the search.
Labeling solve_exact(const ConflictGraph& graph, const ExactParams& params);

Labeling solve(const ConflictGraph& graph, Algorithm algorithm, const SolverOptions& options);

}  // namespace pflp
