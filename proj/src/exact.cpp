#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_map>

#include "pflp/errors.hpp"
#include "pflp/rng.hpp"
#include "pflp/solvers.hpp"

namespace pflp {
namespace {

using Clock = std::chrono::steady_clock;

// Branch and reduce over a compact copy of the graph. Vertices are removed
// and restored through a trail; degrees always count alive neighbors.
class BranchAndReduce {
 public:
  struct Sol {
    std::int64_t weight = 0;
    std::vector<int> verts;
  };

  BranchAndReduce(std::vector<std::vector<int>> adj, std::vector<std::int64_t> w, double time_limit,
                  const ProgressFn& progress)
      : adj_(std::move(adj)),
        w_(std::move(w)),
        n_(static_cast<int>(w_.size())),
        alive_(n_, 1),
        deg_(n_),
        warm_(n_, 0),
        queued_(n_, 0),
        mark_(n_, 0),
        cover_of_(n_, -1),
        start_(Clock::now()),
        time_limit_(time_limit),
        progress_(progress) {
    for (int v = 0; v < n_; ++v) deg_[v] = static_cast<int>(adj_[v].size());
  }

  bool timed_out() const { return timed_out_; }

  // Heuristic incumbents restrict this set to a component and extend it.
  void set_warm(const std::vector<int>& verts) {
    std::fill(warm_.begin(), warm_.end(), 0);
    for (int v : verts) warm_[v] = 1;
  }

  std::vector<int> all_alive() const {
    std::vector<int> out;
    for (int v = 0; v < n_; ++v) {
      if (alive_[v]) out.push_back(v);
    }
    return out;
  }

  // Best independent set of the alive subgraph induced by `scope` whose weight
  // is strictly above `floor`, or nullopt when none exists (or none was found
  // before the deadline). `scope` must be closed under alive adjacency.
  std::optional<Sol> solve(const std::vector<int>& scope, std::int64_t floor) {
    const std::size_t trail_mark = trail_.size();
    const std::size_t chosen_mark = chosen_.size();
    const std::int64_t reduced = reduce(scope);
    std::vector<int> base(chosen_.begin() + static_cast<std::ptrdiff_t>(chosen_mark), chosen_.end());

    std::vector<int> rest;
    for (int v : scope) {
      if (alive_[v]) rest.push_back(v);
    }

    std::optional<Sol> result;
    if (rest.empty()) {
      if (reduced > floor) result = Sol{reduced, base};
    } else {
      auto comps = components(rest);
      std::optional<Sol> inner =
          comps.size() > 1 ? solve_components(comps, floor - reduced) : solve_connected(rest, floor - reduced);
      if (inner) {
        inner->weight += reduced;
        inner->verts.insert(inner->verts.end(), base.begin(), base.end());
        result = std::move(inner);
      }
    }
    restore(trail_mark, chosen_mark);
    return result;
  }

 private:
  std::optional<Sol> solve_components(std::vector<std::vector<int>>& comps, std::int64_t floor) {
    std::vector<std::int64_t> ub(comps.size());
    std::int64_t ub_rest = 0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      ub[i] = clique_cover_bound(comps[i]);
      ub_rest += ub[i];
    }
    if (ub_rest <= floor) return std::nullopt;

    Sol total;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      ub_rest -= ub[i];
      Sol h = heuristic(comps[i]);
      if (h.weight < ub[i]) {
        if (auto sub = solve(comps[i], h.weight)) h = std::move(*sub);
      }
      total.weight += h.weight;
      total.verts.insert(total.verts.end(), h.verts.begin(), h.verts.end());
      if (total.weight + ub_rest <= floor) return std::nullopt;
    }
    if (total.weight <= floor) return std::nullopt;
    return total;
  }

  std::optional<Sol> solve_connected(const std::vector<int>& comp, std::int64_t floor) {
    const std::int64_t ub = clique_cover_bound(comp);
    if (ub <= floor) return std::nullopt;

    std::optional<Sol> best;
    Sol h = heuristic(comp);
    if (h.weight > floor) {
      floor = h.weight;
      best = std::move(h);
    }
    if (ub <= floor || tick()) return best;

    int pivot = comp.front();
    for (int v : comp) {
      if (deg_[v] > deg_[pivot] || (deg_[v] == deg_[pivot] && w_[v] > w_[pivot])) pivot = v;
    }

    // Include the pivot.
    {
      const std::size_t trail_mark = trail_.size();
      const std::size_t chosen_mark = chosen_.size();
      include(pivot);
      auto sub = solve(alive_in(comp), floor - w_[pivot]);
      restore(trail_mark, chosen_mark);
      if (sub) {
        sub->weight += w_[pivot];
        sub->verts.push_back(pivot);
        floor = sub->weight;
        best = std::move(sub);
      }
    }
    if (timed_out_) return best;
    // Exclude it.
    {
      const std::size_t trail_mark = trail_.size();
      remove(pivot);
      auto sub = solve(alive_in(comp), floor);
      restore(trail_mark, chosen_.size());
      if (sub) best = std::move(sub);
    }
    return best;
  }

  // Exhaustive application of the exact rules on `scope`; returns the weight
  // of the vertices it committed to.
  std::int64_t reduce(const std::vector<int>& scope) {
    std::int64_t gained = 0;
    for (int v : scope) {
      if (alive_[v] && !queued_[v]) {
        queued_[v] = 1;
        work_.push_back(v);
      }
    }
    while (!work_.empty()) {
      const int v = work_.back();
      work_.pop_back();
      queued_[v] = 0;
      if (!alive_[v]) continue;
      if (deg_[v] == 0) {
        gained += w_[v];
        include(v);
        continue;
      }
      if (deg_[v] == 1) {
        const int u = first_alive_neighbor(v);
        if (w_[v] >= w_[u]) {
          gained += w_[v];
          include(v);
          continue;
        }
      }
      // Neighborhood domination: if N[a] is inside N[b] and w(a) >= w(b),
      // some optimum avoids b.
      bool removed_v = false;
      for (int u : adj_[v]) {
        if (alive_[u] && deg_[u] <= deg_[v] && w_[u] >= w_[v] && closed_subset(u, v)) {
          remove(v);
          removed_v = true;
          break;
        }
      }
      if (removed_v) continue;
      for (int u : adj_[v]) {
        if (alive_[u] && deg_[v] <= deg_[u] && w_[v] >= w_[u] && closed_subset(v, u)) remove(u);
      }
    }
    return gained;
  }

  // N[a] is a subset of N[b], for adjacent alive a and b.
  bool closed_subset(int a, int b) {
    ++stamp_;
    mark_[b] = stamp_;
    for (int x : adj_[b]) {
      if (alive_[x]) mark_[x] = stamp_;
    }
    for (int x : adj_[a]) {
      if (alive_[x] && mark_[x] != stamp_) return false;
    }
    return true;
  }

  int first_alive_neighbor(int v) const {
    for (int u : adj_[v]) {
      if (alive_[u]) return u;
    }
    return -1;
  }

  void remove(int v) {
    alive_[v] = 0;
    trail_.push_back(v);
    for (int u : adj_[v]) {
      if (!alive_[u]) continue;
      --deg_[u];
      if (!queued_[u]) {
        queued_[u] = 1;
        work_.push_back(u);
      }
    }
  }

  void include(int v) {
    chosen_.push_back(v);
    remove(v);
    for (int u : adj_[v]) {
      if (alive_[u]) remove(u);
    }
  }

  void restore(std::size_t trail_mark, std::size_t chosen_mark) {
    while (trail_.size() > trail_mark) {
      const int v = trail_.back();
      trail_.pop_back();
      alive_[v] = 1;
      for (int u : adj_[v]) {
        if (alive_[u]) ++deg_[u];
      }
    }
    chosen_.resize(chosen_mark);
    // Anything queued now refers to a state that no longer exists.
    for (int v : work_) queued_[v] = 0;
    work_.clear();
  }

  std::vector<int> alive_in(const std::vector<int>& comp) const {
    std::vector<int> out;
    for (int v : comp) {
      if (alive_[v]) out.push_back(v);
    }
    return out;
  }

  std::vector<std::vector<int>> components(const std::vector<int>& verts) {
    std::vector<std::vector<int>> comps;
    ++stamp_;
    for (int s : verts) {
      if (mark_[s] == stamp_) continue;
      mark_[s] = stamp_;
      std::vector<int> comp{s};
      for (std::size_t head = 0; head < comp.size(); ++head) {
        for (int u : adj_[comp[head]]) {
          if (alive_[u] && mark_[u] != stamp_) {
            mark_[u] = stamp_;
            comp.push_back(u);
          }
        }
      }
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
    return comps;
  }

  // Greedy clique cover in decreasing weight order; each clique costs its
  // heaviest member, which bounds any independent set from above.
  std::int64_t clique_cover_bound(const std::vector<int>& comp) {
    std::vector<int> order = comp;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return w_[a] != w_[b] ? w_[a] > w_[b] : a < b; });
    for (int v : order) cover_of_[v] = -1;
    cover_size_.clear();
    cover_hits_.clear();
    std::int64_t bound = 0;
    for (int v : order) {
      touched_.clear();
      for (int u : adj_[v]) {
        if (!alive_[u] || cover_of_[u] < 0) continue;
        const int c = cover_of_[u];
        if (cover_hits_[c]++ == 0) touched_.push_back(c);
      }
      int target = -1;
      for (int c : touched_) {
        if (target < 0 && cover_hits_[c] == cover_size_[c]) target = c;
        cover_hits_[c] = 0;
      }
      if (target < 0) {
        target = static_cast<int>(cover_size_.size());
        cover_size_.push_back(0);
        cover_hits_.push_back(0);
        bound += w_[v];
      }
      ++cover_size_[target];
      cover_of_[v] = target;
    }
    for (int v : order) cover_of_[v] = -1;
    return bound;
  }

  Sol greedy_extend(const std::vector<int>& comp, std::vector<int> start) {
    ++stamp_;
    Sol s;
    for (int v : start) {
      mark_[v] = stamp_;
      for (int u : adj_[v]) mark_[u] = stamp_;
      s.weight += w_[v];
    }
    s.verts = std::move(start);
    for (int v : greedy_order_) {
      if (mark_[v] == stamp_) continue;
      s.verts.push_back(v);
      s.weight += w_[v];
      mark_[v] = stamp_;
      for (int u : adj_[v]) mark_[u] = stamp_;
    }
    (void)comp;
    return s;
  }

  Sol heuristic(const std::vector<int>& comp) {
    greedy_order_ = comp;
    std::sort(greedy_order_.begin(), greedy_order_.end(), [&](int a, int b) {
      const double ka = static_cast<double>(w_[a]) / (deg_[a] + 1);
      const double kb = static_cast<double>(w_[b]) / (deg_[b] + 1);
      return ka != kb ? ka > kb : a < b;
    });
    Sol plain = greedy_extend(comp, {});
    std::vector<int> seeded;
    for (int v : comp) {
      if (warm_[v]) seeded.push_back(v);
    }
    if (seeded.empty()) return plain;
    Sol warm = greedy_extend(comp, std::move(seeded));
    return warm.weight > plain.weight ? warm : plain;
  }

  // Counts search nodes; returns true once the deadline has passed.
  bool tick() {
    if (timed_out_) return true;
    if (++nodes_ % 64 != 0) return false;
    const double elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
    if (progress_) progress_(std::min(0.99, elapsed / time_limit_));
    if (elapsed >= time_limit_) timed_out_ = true;
    return timed_out_;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<std::int64_t> w_;
  int n_;
  std::vector<char> alive_;
  std::vector<int> deg_;
  std::vector<char> warm_;
  std::vector<char> queued_;
  std::vector<std::uint64_t> mark_;
  std::uint64_t stamp_ = 0;
  std::vector<int> trail_;
  std::vector<int> chosen_;
  std::vector<int> work_;
  std::vector<int> cover_of_, cover_size_, cover_hits_, touched_;
  std::vector<int> greedy_order_;
  Clock::time_point start_;
  double time_limit_;
  const ProgressFn& progress_;
  std::uint64_t nodes_ = 0;
  bool timed_out_ = false;
};

const ProgressFn kNoProgress;

// Large neighborhood search for the incumbent: a window of whole features
// around each feature in turn is re-solved exactly with everything outside it
// held fixed. Passes repeat until one finds nothing or the deadline passes.
std::vector<int> improve_by_windows(const std::vector<std::vector<int>>& adj, const std::vector<std::int64_t>& w,
                                    const std::vector<int>& group, std::vector<int> start, Clock::time_point deadline,
                                    std::size_t window_size) {
  const int n = static_cast<int>(w.size());
  int groups = 0;
  for (int g : group) groups = std::max(groups, g + 1);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(groups));
  for (int v = 0; v < n; ++v) members[group[v]].push_back(v);

  std::vector<char> sel(n, 0);
  for (int v : start) sel[v] = 1;
  std::vector<int> local(n, -1);
  std::vector<std::uint64_t> in_win(static_cast<std::size_t>(groups), 0);
  std::uint64_t stamp = 0;

  std::vector<int> order(static_cast<std::size_t>(groups));
  for (int g = 0; g < groups; ++g) order[g] = g;
  Rng rng(0x5eed);
  rng.shuffle(order.begin(), order.end());

  bool improved = true;
  while (improved && Clock::now() < deadline) {
    improved = false;
    for (int seed : order) {
      if (Clock::now() >= deadline) break;
      ++stamp;
      std::vector<int> win{seed};
      in_win[seed] = stamp;
      std::size_t count = members[seed].size();
      for (std::size_t head = 0; head < win.size(); ++head) {
        for (int v : members[win[head]]) {
          for (int u : adj[v]) {
            const int g = group[u];
            if (in_win[g] == stamp || count + members[g].size() > window_size) continue;
            in_win[g] = stamp;
            count += members[g].size();
            win.push_back(g);
          }
        }
      }

      // Free vertices of the window: no selected neighbor outside it.
      std::vector<int> verts, current;
      std::int64_t current_w = 0;
      for (int g : win) {
        for (int v : members[g]) {
          if (sel[v]) {
            current_w += w[v];
          }
          bool free = true;
          for (int u : adj[v]) {
            if (sel[u] && in_win[group[u]] != stamp) {
              free = false;
              break;
            }
          }
          if (!free) continue;
          local[v] = static_cast<int>(verts.size());
          verts.push_back(v);
          if (sel[v]) current.push_back(local[v]);
        }
      }
      std::vector<std::vector<int>> sub_adj(verts.size());
      std::vector<std::int64_t> sub_w(verts.size());
      for (std::size_t i = 0; i < verts.size(); ++i) {
        sub_w[i] = w[verts[i]];
        for (int u : adj[verts[i]]) {
          if (in_win[group[u]] == stamp && local[u] >= 0) sub_adj[i].push_back(local[u]);
        }
      }
      BranchAndReduce sub(std::move(sub_adj), std::move(sub_w), 0.25, kNoProgress);
      sub.set_warm(current);
      auto better = sub.solve(sub.all_alive(), current_w);
      if (better && better->weight > current_w) {
        for (int g : win) {
          for (int v : members[g]) sel[v] = 0;
        }
        for (int i : better->verts) sel[verts[i]] = 1;
        improved = true;
      }
      for (int v : verts) local[v] = -1;
    }
  }
  std::vector<int> out;
  for (int v = 0; v < n; ++v) {
    if (sel[v]) out.push_back(v);
  }
  return out;
}

// Adds vertices to an independent set in decreasing w / (deg + 1) order.
std::vector<int> extend_greedy(const std::vector<std::vector<int>>& adj, const std::vector<std::int64_t>& w,
                               std::vector<int> start) {
  const std::size_t n = w.size();
  std::vector<char> blocked(n, 0);
  for (int v : start) {
    blocked[v] = 1;
    for (int u : adj[v]) blocked[u] = 1;
  }
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ka = static_cast<double>(w[a]) / static_cast<double>(adj[a].size() + 1);
    const double kb = static_cast<double>(w[b]) / static_cast<double>(adj[b].size() + 1);
    return ka != kb ? ka > kb : a < b;
  });
  for (int v : order) {
    if (blocked[v]) continue;
    start.push_back(v);
    blocked[v] = 1;
    for (int u : adj[v]) blocked[u] = 1;
  }
  return start;
}

// Greedy thinning of an arbitrary id list into an independent set of live
// vertices, heaviest first.
std::vector<CandidateId> independent_subset(const ConflictGraph& graph, std::vector<CandidateId> ids) {
  std::vector<CandidateId> out;
  std::erase_if(ids, [&](CandidateId v) { return !graph.contains(v); });
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::stable_sort(ids.begin(), ids.end(),
                   [&](CandidateId a, CandidateId b) { return graph.weight(a) > graph.weight(b); });
  for (CandidateId v : ids) {
    const bool clash = std::any_of(out.begin(), out.end(), [&](CandidateId s) { return graph.has_edge(s, v); });
    if (!clash) out.push_back(v);
  }
  return out;
}

}  // namespace

Labeling solve_exact(const ConflictGraph& graph, const ExactParams& params) {
  if (!(params.time_limit > 0.0)) throw InvalidInput("time_limit must be positive");
  if (params.weight_scale <= 0) throw InvalidInput("weight_scale must be positive");
  const auto start = Clock::now();

  const auto ids = graph.vertices();
  std::vector<int> index(graph.id_bound(), -1);
  for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i].value] = static_cast<int>(i);
  std::vector<std::vector<int>> adj(ids.size());
  std::vector<std::int64_t> w(ids.size());
  std::vector<int> group(ids.size());
  std::unordered_map<FeatureId, int> feature_group;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    group[i] = feature_group.emplace(graph.feature(ids[i]), static_cast<int>(feature_group.size())).first->second;
    for (CandidateId u : graph.neighbors(ids[i])) adj[i].push_back(index[u.value]);
    const auto scaled = std::llround(graph.weight(ids[i]) * static_cast<double>(params.weight_scale));
    w[i] = std::max<std::int64_t>(1, scaled);
  }

  // Ties between equally heavy solutions go to the caller's warm start: each
  // weight is scaled by n + 1 and preferred vertices get one extra unit.
  std::vector<int> preferred;
  for (CandidateId v : independent_subset(graph, params.warm_start)) preferred.push_back(index[v.value]);
  if (params.prefer_warm_start && !preferred.empty()) {
    const auto m = static_cast<std::int64_t>(ids.size()) + 1;
    std::int64_t total = 0;
    for (auto x : w) total += x;
    if (total <= std::numeric_limits<std::int64_t>::max() / (4 * m)) {
      for (auto& x : w) x *= m;
      for (int v : preferred) w[v] += 1;
    }
  }

  // Incumbent: the heavier of the extended warm start and a POPMUSIC run.
  auto weigh = [&](const std::vector<int>& s) {
    std::int64_t t = 0;
    for (int v : s) t += w[v];
    return t;
  };
  std::vector<int> warm_idx = extend_greedy(adj, w, preferred);
  if (params.heuristic_warm_start && !ids.empty()) {
    std::vector<int> pm;
    for (CandidateId v : solve_popmusic(graph, PopmusicParams{}).selected) pm.push_back(index[v.value]);
    if (weigh(pm) > weigh(warm_idx)) warm_idx = std::move(pm);
  }
  if (params.window_search && !ids.empty()) {
    const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(params.time_limit * params.window_share));
    warm_idx = improve_by_windows(adj, w, group, std::move(warm_idx), deadline, params.window_labels);
  }
  std::int64_t warm_weight = 0;
  for (int v : warm_idx) warm_weight += w[v];

  BranchAndReduce search(std::move(adj), std::move(w), params.time_limit, params.progress);
  search.set_warm(warm_idx);
  // With an empty incumbent the floor is -1 so the empty set still counts.
  const std::int64_t floor = warm_idx.empty() ? -1 : warm_weight;
  auto found = search.solve(search.all_alive(), floor);

  std::vector<CandidateId> chosen;
  if (found) {
    for (int v : found->verts) chosen.push_back(ids[v]);
  } else {
    for (int v : warm_idx) chosen.push_back(ids[v]);
  }
  Labeling result = make_labeling(graph, std::move(chosen));
  result.proven_optimal = !search.timed_out();
  if (params.progress) params.progress(1.0);
  return result;
}

}  // namespace pflp
