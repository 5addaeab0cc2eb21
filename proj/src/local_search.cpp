#include <algorithm>
#include <deque>
#include <limits>

#include "feature_index.hpp"
#include "pflp/errors.hpp"
#include "pflp/rng.hpp"
#include "pflp/solvers.hpp"

namespace pflp {
namespace {

constexpr double kMinGain = 1e-9;

// Current labeling as one optional label per feature, with per-vertex counts
// of selected neighbors. Chains record every toggle so they can be rolled back
// to the best prefix.
class ChainSearch {
 public:
  struct ChainResult {
    double gain = 0.0;
    std::vector<int> considered;  // feature groups touched by the chain
  };

  ChainSearch(const ConflictGraph& graph, const detail::FeatureIndex& index, const Labeling& initial)
      : graph_(graph),
        index_(index),
        selected_(graph.id_bound(), 0),
        blocked_(graph.id_bound(), 0),
        label_(index.size()),
        modified_(index.size(), 0) {
    if (!validate_labeling(graph, initial).empty()) {
      throw InvalidInput("initial labeling is not conflict-free on this graph");
    }
    for (CandidateId v : initial.selected) select(v);
  }

  std::size_t features() const { return index_.size(); }

  Labeling labeling() const {
    std::vector<CandidateId> ids;
    for (CandidateId v : label_) {
      if (v.valid()) ids.push_back(v);
    }
    return make_labeling(graph_, std::move(ids));
  }

  // One chain of at most `max_len` modifications seeded at feature group `g`.
  // `allowed`, when given, restricts moves, evictions and re-insertions to the
  // flagged groups. The labeling ends at the best prefix of the chain, or
  // unchanged when no prefix gained weight.
  ChainResult run_chain(int g, int max_len, const std::vector<char>* allowed) {
    ++stamp_;
    log_.clear();
    ChainResult result;
    result.considered.push_back(g);
    double cum = 0.0;
    std::size_t best_len = 0;

    auto group_ok = [&](int f) { return allowed == nullptr || (*allowed)[f] != 0; };
    auto modified = [&](int f) { return modified_[f] == stamp_; };
    auto group = [&](CandidateId v) { return index_.group_of[v.value]; };

    for (int step = 0; step < max_len; ++step) {
      modified_[g] = stamp_;
      const CandidateId cur = label_[g];
      const double cur_w = cur.valid() ? graph_.weight(cur) : 0.0;

      CandidateId move;
      double move_gain = -std::numeric_limits<double>::infinity();
      for (CandidateId c : index_.members[g]) {
        if (c == cur) continue;
        double lost = cur_w;
        bool legal = true;
        for (CandidateId n : graph_.neighbors(c)) {
          if (!selected_[n.value] || n == cur) continue;
          const int f = group(n);
          if (!group_ok(f) || modified(f)) {
            legal = false;
            break;
          }
          lost += graph_.weight(n);
        }
        if (!legal) continue;
        const double gain = graph_.weight(c) - lost;
        if (gain > move_gain) {
          move_gain = gain;
          move = c;
        }
      }
      const bool unlabel = cur.valid() && (!move.valid() || -cur_w > move_gain);
      if (!move.valid() && !unlabel) break;

      freed_.clear();
      evicted_.clear();
      if (cur.valid()) {
        toggle(cur, false);
        freed_.push_back(cur);
      }
      if (unlabel) {
        cum -= cur_w;
      } else {
        for (CandidateId n : graph_.neighbors(move)) {
          if (!selected_[n.value]) continue;
          evicted_.push_back(n);
          toggle(n, false);
          freed_.push_back(n);
        }
        toggle(move, true);
        cum += move_gain;
      }

      // Greedy re-insertion around everything that was just freed.
      reinsert_.clear();
      for (CandidateId x : freed_) {
        for (CandidateId y : graph_.neighbors(x)) {
          const int f = group(y);
          if (!selected_[y.value] && blocked_[y.value] == 0 && !label_[f].valid() && group_ok(f) &&
              !modified(f)) {
            reinsert_.push_back(y);
          }
        }
      }
      std::sort(reinsert_.begin(), reinsert_.end(), [&](CandidateId a, CandidateId b) {
        const double wa = graph_.weight(a), wb = graph_.weight(b);
        if (wa != wb) return wa > wb;
        const int ra = slot_rank(graph_.vertex(a).slot), rb = slot_rank(graph_.vertex(b).slot);
        if (ra != rb) return ra < rb;
        return a < b;
      });
      reinsert_.erase(std::unique(reinsert_.begin(), reinsert_.end()), reinsert_.end());
      for (CandidateId y : reinsert_) {
        if (blocked_[y.value] != 0 || label_[group(y)].valid()) continue;
        toggle(y, true);
        cum += graph_.weight(y);
        result.considered.push_back(group(y));
      }

      if (cum > result.gain + kMinGain) {
        result.gain = cum;
        best_len = log_.size();
      }

      // Continue with the heaviest evicted feature that is still unlabeled.
      int next = -1;
      double next_w = -1.0;
      for (CandidateId n : evicted_) {
        const int f = group(n);
        result.considered.push_back(f);
        if (label_[f].valid() || modified(f)) continue;
        const double w = graph_.weight(n);
        if (w > next_w || (w == next_w && f < next)) {
          next = f;
          next_w = w;
        }
      }
      if (next < 0) break;
      g = next;
    }

    while (log_.size() > best_len) {
      auto [v, on] = log_.back();
      log_.pop_back();
      if (on) {
        unselect(v);
      } else {
        select(v);
      }
    }
    return result;
  }

 private:
  void select(CandidateId v) {
    selected_[v.value] = 1;
    label_[index_.group_of[v.value]] = v;
    for (CandidateId n : graph_.neighbors(v)) ++blocked_[n.value];
  }

  void unselect(CandidateId v) {
    selected_[v.value] = 0;
    label_[index_.group_of[v.value]] = CandidateId{};
    for (CandidateId n : graph_.neighbors(v)) --blocked_[n.value];
  }

  void toggle(CandidateId v, bool on) {
    if (on) {
      select(v);
    } else {
      unselect(v);
    }
    log_.emplace_back(v, on);
  }

  const ConflictGraph& graph_;
  const detail::FeatureIndex& index_;
  std::vector<char> selected_;
  std::vector<int> blocked_;
  std::vector<CandidateId> label_;
  std::vector<std::uint64_t> modified_;
  std::uint64_t stamp_ = 0;
  std::vector<std::pair<CandidateId, bool>> log_;
  std::vector<CandidateId> freed_, evicted_, reinsert_;
};

// Features reachable from `seed` through conflicts, breadth first, while the
// total candidate count stays within `label_bound`.
std::vector<int> subpart(const ConflictGraph& graph, const detail::FeatureIndex& index, int seed,
                         int label_bound, std::vector<char>& in_part) {
  std::vector<int> part{seed};
  in_part[seed] = 1;
  std::size_t labels = index.members[seed].size();
  for (std::size_t head = 0; head < part.size(); ++head) {
    for (CandidateId c : index.members[part[head]]) {
      for (CandidateId n : graph.neighbors(c)) {
        const int f = index.group_of[n.value];
        if (in_part[f]) continue;
        if (labels + index.members[f].size() > static_cast<std::size_t>(label_bound)) continue;
        in_part[f] = 1;
        labels += index.members[f].size();
        part.push_back(f);
      }
    }
  }
  return part;
}

}  // namespace

Labeling solve_chain(const ConflictGraph& graph, const Labeling& initial, const ChainParams& params) {
  if (params.max_chain_length < 1) throw InvalidInput("max_chain_length must be positive");
  const detail::FeatureIndex index(graph);
  ChainSearch search(graph, index, initial);
  const std::size_t budget = params.iteration_budget.value_or(50 * index.size());
  if (index.size() == 0 || budget == 0) return search.labeling();

  Rng rng(params.rng_seed);
  for (std::size_t it = 0; it < budget; ++it) {
    const int g = static_cast<int>(rng.index(index.size()));
    search.run_chain(g, params.max_chain_length, nullptr);
  }
  return search.labeling();
}

Labeling solve_popmusic(const ConflictGraph& graph, const PopmusicParams& params) {
  if (params.chain.max_chain_length < 1 || params.subpart_label_bound < 1 || params.tabu_tenure < 1) {
    throw InvalidInput("POPMUSIC parameters must be positive");
  }
  const detail::FeatureIndex index(graph);
  const std::size_t n = index.size();
  ChainSearch search(graph, index, solve_falp(graph));
  if (n == 0) return search.labeling();

  Rng rng(params.chain.rng_seed);
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  rng.shuffle(order.begin(), order.end());

  // L: features whose last optimization found nothing. Done when L is full.
  std::vector<char> in_list(n, 0);
  std::size_t list_size = 0;
  std::vector<char> in_part(n, 0);
  std::vector<char> touched(n, 0);
  std::vector<int> touched_list;
  std::size_t cursor = 0;

  while (list_size < n) {
    while (in_list[order[cursor]]) cursor = (cursor + 1) % n;
    const int seed = order[cursor];
    cursor = (cursor + 1) % n;

    const auto part = subpart(graph, index, seed, params.subpart_label_bound, in_part);
    bool improved = false;
    std::deque<int> tabu;
    std::vector<int> eligible;
    for (std::size_t t = 0; t < part.size(); ++t) {
      int from = seed;
      if (t > 0) {
        eligible.clear();
        for (int f : part) {
          if (std::find(tabu.begin(), tabu.end(), f) == tabu.end()) eligible.push_back(f);
        }
        if (eligible.empty()) break;
        from = eligible[rng.index(eligible.size())];
      }
      const auto result = search.run_chain(from, params.chain.max_chain_length, &in_part);
      for (int f : result.considered) {
        if (!touched[f]) {
          touched[f] = 1;
          touched_list.push_back(f);
        }
      }
      if (result.gain > kMinGain) improved = true;
      tabu.push_back(from);
      if (tabu.size() > static_cast<std::size_t>(params.tabu_tenure)) tabu.pop_front();
    }
    for (int f : part) in_part[f] = 0;

    if (improved) {
      for (int f : touched_list) {
        if (in_list[f]) {
          in_list[f] = 0;
          --list_size;
        }
      }
    } else {
      in_list[seed] = 1;
      ++list_size;
    }
    for (int f : touched_list) touched[f] = 0;
    touched_list.clear();
    if (params.progress) params.progress(static_cast<double>(list_size) / static_cast<double>(n));
  }
  return search.labeling();
}

}  // namespace pflp
