#pragma once

#include <algorithm>
#include <vector>

#include "pflp/conflict_graph.hpp"

namespace pflp::detail {

// Groups live vertices by feature: dense feature numbers, member lists in slot
// preference order, and a vertex -> feature-number table addressed by id value.
struct FeatureIndex {
  std::vector<FeatureId> features;
  std::vector<std::vector<CandidateId>> members;
  std::vector<int> group_of;  // -1 for dead ids

  explicit FeatureIndex(const ConflictGraph& graph) : group_of(graph.id_bound(), -1) {
    auto verts = graph.vertices();
    std::stable_sort(verts.begin(), verts.end(), [&](CandidateId a, CandidateId b) {
      return graph.feature(a) < graph.feature(b);
    });
    for (CandidateId v : verts) {
      if (features.empty() || features.back() != graph.feature(v)) {
        features.push_back(graph.feature(v));
        members.emplace_back();
      }
      members.back().push_back(v);
      group_of[v.value] = static_cast<int>(features.size()) - 1;
    }
    for (auto& m : members) {
      std::stable_sort(m.begin(), m.end(), [&](CandidateId a, CandidateId b) {
        return slot_rank(graph.vertex(a).slot) < slot_rank(graph.vertex(b).slot);
      });
    }
  }

  std::size_t size() const { return features.size(); }
};

}  // namespace pflp::detail
