#include "pflp/update.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "pflp/errors.hpp"

namespace pflp {
namespace {

void check_fixations(const ConflictGraph& graph, const std::vector<CandidateId>& fixed) {
  for (CandidateId f : fixed) {
    for (CandidateId n : graph.neighbors(f)) {
      if (f < n && graph.vertex(n).fixed) throw FixationConflict(f, n);
    }
  }
}

std::vector<CandidateId> live_subset(const ConflictGraph& graph, const Labeling& labeling) {
  std::vector<CandidateId> out;
  for (CandidateId v : labeling.selected) {
    if (graph.contains(v)) out.push_back(v);
  }
  return out;
}

}  // namespace

StabilityReport stability(const Labeling& before, const Labeling& after) {
  std::vector<CandidateId> a = before.selected, b = after.selected;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<CandidateId> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  StabilityReport r;
  r.kept = common.size();
  r.dropped = a.size() - common.size();
  r.added = b.size() - common.size();
  const std::size_t uni = r.kept + r.dropped + r.added;
  r.ratio = uni == 0 ? 1.0 : static_cast<double>(r.kept) / static_cast<double>(uni);
  return r;
}

double effective_epsilon(const UpdateParams& params, std::size_t previous_size) {
  if (params.strict_mode) return 1.0 / (2.0 * static_cast<double>(std::max<std::size_t>(1, previous_size)));
  if (!(params.epsilon >= 0.0) || !std::isfinite(params.epsilon)) {
    throw InvalidInput("epsilon must be a non-negative number");
  }
  return params.epsilon;
}

ConflictGraph boost_weights(const ConflictGraph& graph, const Labeling& previous, const UpdateParams& params) {
  const double eps = effective_epsilon(params, previous.size());
  ConflictGraph out = graph;
  if (eps == 0.0) return out;
  for (CandidateId v : live_subset(graph, previous)) out.set_weight(v, graph.weight(v) + eps);
  return out;
}

UpdateResult update_labeling(const ConflictGraph& graph, const Labeling& previous, Algorithm algorithm,
                             const UpdateParams& params, const SolverOptions& options) {
  const auto fixed = graph.fixed_vertices();
  check_fixations(graph, fixed);
  auto kept = live_subset(graph, previous);

  std::vector<CandidateId> chosen;
  bool optimal = false;
  if (algorithm == Algorithm::Greedy) {
    // Old labels first, heaviest first, skipping any that now clash with a
    // fixation or with an old label already kept.
    std::vector<char> blocked(graph.id_bound(), 0);
    for (CandidateId f : fixed) {
      blocked[f.value] = 1;
      for (CandidateId n : graph.neighbors(f)) blocked[n.value] = 1;
    }
    std::stable_sort(kept.begin(), kept.end(),
                     [&](CandidateId a, CandidateId b) { return graph.weight(a) > graph.weight(b); });
    std::vector<CandidateId> preset = fixed;
    for (CandidateId v : kept) {
      if (blocked[v.value]) continue;
      preset.push_back(v);
      blocked[v.value] = 1;
      for (CandidateId n : graph.neighbors(v)) blocked[n.value] = 1;
    }
    chosen = solve_greedy(graph, preset, options.seed).selected;
  } else {
    ConflictGraph boosted = boost_weights(graph, previous, params);
    for (CandidateId f : fixed) {
      if (!boosted.contains(f)) continue;
      const auto nbrs = boosted.neighbors(f);
      const std::vector<CandidateId> drop(nbrs.begin(), nbrs.end());
      for (CandidateId n : drop) boosted.remove_vertex(n);
      boosted.remove_vertex(f);
    }
    SolverOptions opts = options;
    if (algorithm == Algorithm::Exact) {
      std::erase_if(kept, [&](CandidateId v) { return !boosted.contains(v); });
      opts.exact.warm_start = kept;
    }
    auto solved = solve(boosted, algorithm, opts);
    optimal = solved.proven_optimal;
    chosen = std::move(solved.selected);
    chosen.insert(chosen.end(), fixed.begin(), fixed.end());
  }

  UpdateResult result;
  result.labeling = make_labeling(graph, std::move(chosen));
  result.labeling.proven_optimal = optimal;
  result.report = stability(previous, result.labeling);
  return result;
}

}  // namespace pflp
