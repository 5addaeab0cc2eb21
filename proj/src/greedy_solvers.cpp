#include <algorithm>
#include <array>
#include <queue>
#include <tuple>

#include "feature_index.hpp"
#include "pflp/errors.hpp"
#include "pflp/rng.hpp"
#include "pflp/solvers.hpp"

namespace pflp {
namespace {

constexpr std::array<std::string_view, 6> kAlgorithmNames = {
    "greedy", "mis", "falp", "chain", "popmusic", "exact",
};

}  // namespace

std::string_view to_string(Algorithm a) { return kAlgorithmNames[static_cast<std::size_t>(a)]; }

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (std::size_t i = 0; i < kAlgorithmNames.size(); ++i) {
    if (kAlgorithmNames[i] == name) return static_cast<Algorithm>(i);
  }
  if (name == "mhs") return Algorithm::Exact;
  return std::nullopt;
}

Labeling solve_greedy(const ConflictGraph& graph, std::span<const CandidateId> preset,
                      std::uint64_t seed) {
  std::vector<char> in_preset(graph.id_bound(), 0);
  for (CandidateId p : preset) {
    if (!graph.contains(p)) throw NotFound("unknown preset candidate " + std::to_string(p.value), p.value);
    in_preset[p.value] = 1;
  }
  for (CandidateId p : preset) {
    for (CandidateId n : graph.neighbors(p)) {
      if (in_preset[n.value]) throw PresetConflict(std::min(p, n), std::max(p, n));
    }
  }

  std::vector<char> marked(graph.id_bound(), 0);
  std::vector<CandidateId> chosen(preset.begin(), preset.end());
  for (CandidateId p : preset) {
    marked[p.value] = 1;
    for (CandidateId n : graph.neighbors(p)) marked[n.value] = 1;
  }

  // Random order within equal weights, then a stable sort by weight: scanning
  // this order picks a uniformly random unmarked vertex among the heaviest.
  auto order = graph.vertices();
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](CandidateId a, CandidateId b) { return graph.weight(a) > graph.weight(b); });
  for (CandidateId v : order) {
    if (marked[v.value]) continue;
    chosen.push_back(v);
    marked[v.value] = 1;
    for (CandidateId n : graph.neighbors(v)) marked[n.value] = 1;
  }
  return make_labeling(graph, std::move(chosen));
}

Labeling solve_mis(const ConflictGraph& graph) {
  const std::uint32_t bound = graph.id_bound();
  std::vector<std::size_t> deg(bound, 0);
  std::vector<char> removed(bound, 0);
  std::vector<char> in_cover(bound, 0);
  std::vector<CandidateId> cover_order;

  // Lazy min-heap on (w/deg, id); an entry is stale once the degree moved.
  using Entry = std::tuple<double, CandidateId, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (CandidateId v : graph.vertices()) {
    deg[v.value] = graph.degree(v);
    if (deg[v.value] > 0) heap.emplace(graph.weight(v) / static_cast<double>(deg[v.value]), v, deg[v.value]);
  }
  while (!heap.empty()) {
    auto [ratio, v, d] = heap.top();
    heap.pop();
    if (removed[v.value] || d != deg[v.value] || d == 0) continue;
    removed[v.value] = 1;
    in_cover[v.value] = 1;
    cover_order.push_back(v);
    for (CandidateId n : graph.neighbors(v)) {
      if (removed[n.value]) continue;
      if (--deg[n.value] > 0) {
        heap.emplace(graph.weight(n) / static_cast<double>(deg[n.value]), n, deg[n.value]);
      }
    }
  }

  // Make the cover minimal: a cover vertex whose neighbors are all covered
  // is redundant. Reverse insertion order keeps the early, cheap picks.
  for (auto it = cover_order.rbegin(); it != cover_order.rend(); ++it) {
    const auto nbrs = graph.neighbors(*it);
    if (std::all_of(nbrs.begin(), nbrs.end(), [&](CandidateId n) { return in_cover[n.value] != 0; })) {
      in_cover[it->value] = 0;
    }
  }

  std::vector<CandidateId> chosen;
  for (CandidateId v : graph.vertices()) {
    if (!in_cover[v.value]) chosen.push_back(v);
  }
  return make_labeling(graph, std::move(chosen));
}

Labeling solve_falp(const ConflictGraph& graph) {
  const std::uint32_t bound = graph.id_bound();
  const detail::FeatureIndex index(graph);
  std::vector<std::size_t> count(bound, 0);
  std::vector<char> removed(bound, 0);
  std::vector<CandidateId> chosen;

  using Entry = std::tuple<std::size_t, int, CandidateId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (CandidateId v : graph.vertices()) {
    count[v.value] = graph.degree(v);
    heap.emplace(count[v.value], slot_rank(graph.vertex(v).slot), v);
  }

  std::vector<CandidateId> dropped;
  auto drop = [&](CandidateId x) {
    if (removed[x.value]) return;
    removed[x.value] = 1;
    dropped.push_back(x);
  };
  while (!heap.empty()) {
    auto [c, rank, v] = heap.top();
    heap.pop();
    if (removed[v.value] || c != count[v.value]) continue;
    removed[v.value] = 1;
    chosen.push_back(v);
    dropped.clear();
    for (CandidateId x : index.members[index.group_of[v.value]]) drop(x);
    for (CandidateId x : graph.neighbors(v)) drop(x);
    for (CandidateId x : dropped) {
      for (CandidateId y : graph.neighbors(x)) {
        if (removed[y.value]) continue;
        --count[y.value];
        heap.emplace(count[y.value], slot_rank(graph.vertex(y).slot), y);
      }
    }
  }
  return make_labeling(graph, std::move(chosen));
}

Labeling solve(const ConflictGraph& graph, Algorithm algorithm, const SolverOptions& options) {
  switch (algorithm) {
    case Algorithm::Greedy: return solve_greedy(graph, {}, options.seed);
    case Algorithm::Mis: return solve_mis(graph);
    case Algorithm::Falp: return solve_falp(graph);
    case Algorithm::Chain: {
      ChainParams p = options.chain;
      p.rng_seed = mix_seed(options.seed, p.rng_seed);
      return solve_chain(graph, solve_falp(graph), p);
    }
    case Algorithm::Popmusic: {
      PopmusicParams p = options.popmusic;
      p.chain.rng_seed = mix_seed(options.seed, p.chain.rng_seed);
      return solve_popmusic(graph, p);
    }
    case Algorithm::Exact: return solve_exact(graph, options.exact);
  }
  throw InvalidInput("unknown algorithm");
}

}  // namespace pflp
