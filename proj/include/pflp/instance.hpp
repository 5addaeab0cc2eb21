#pragma once

#include <span>
#include <vector>

#include "pflp/candgen.hpp"
#include "pflp/conflict_graph.hpp"
#include "pflp/edits.hpp"
#include "pflp/spatial_grid.hpp"

namespace pflp {

struct InstanceConfig {
  int zoom = 12;
  PositionModel model = PositionModel::Four;
  TextMetricsConfig metrics;
  LabelStyle style;
  // Dragged labels become fixed.
  bool keep_fixed = false;
  // Once a feature was shrunk, later enlarge edits are ignored.
  bool shrink_precedence = false;
};

// Features, their candidates and the conflict graph kept in sync under edits.
// Feature ids must be 0..n-1 in order.
class Instance {
 public:
  Instance(std::vector<FeaturePoint> features, const InstanceConfig& config);
  // Restores a saved state; candidate ids must be 0..m-1 in order.
  Instance(std::vector<FeaturePoint> features, std::vector<LabelCandidate> candidates,
           const InstanceConfig& config);

  const InstanceConfig& config() const { return config_; }
  void set_keep_fixed(bool on) { config_.keep_fixed = on; }

  const std::vector<FeaturePoint>& features() const { return features_; }
  const FeaturePoint& feature(FeatureId id) const;
  // All candidates ever created, indexed by id; deleted ones included.
  std::span<const LabelCandidate> candidates() const { return candidates_; }
  const LabelCandidate& candidate(CandidateId id) const;
  std::vector<CandidateId> live_candidates_of(FeatureId id) const;
  std::vector<CandidateId> live_candidates() const;
  std::size_t live_feature_count() const;

  const ConflictGraph& graph() const { return graph_; }
  // From-scratch graph over the current candidates.
  ConflictGraph rebuild_graph() const;

  // Delta of an edit without applying it. Throws NotFound or InvalidInput.
  EditDelta preview(const Edit& edit) const;
  // Applies a delta computed against the current state.
  void commit(const EditDelta& delta);
  // preview + commit, recorded on the undo stack unless empty.
  EditDelta apply_edit(const Edit& edit);

  std::size_t undo_depth() const { return undo_.size(); }
  const std::vector<EditDelta>& history() const { return undo_; }
  // Replaces the undo stack, e.g. after loading a session file.
  void set_history(std::vector<EditDelta> history) { undo_ = std::move(history); }
  // Reverts the last recorded edit and returns the delta that was applied.
  // Throws NothingToUndo on an empty history.
  EditDelta undo();

 private:
  FeatureId resolve(const EditTarget& target) const;
  const LabelCandidate& live_candidate(CandidateId id) const;
  EditDelta restyle(FeatureId f, const LabelStyle& style, const std::string& text, bool mark_shrunk) const;
  // Edge diff for candidates whose rects change to the given ones (or that
  // are new), against the current graph.
  void diff_edges(const std::vector<LabelCandidate>& changed, EditDelta& delta) const;
  void remove_candidates(const std::vector<CandidateId>& ids, EditDelta& delta) const;
  void index_candidates();

  std::vector<FeaturePoint> features_;
  std::vector<Point> anchors_;
  std::vector<LabelCandidate> candidates_;
  std::vector<std::vector<CandidateId>> members_;
  InstanceConfig config_;
  SpatialGrid grid_;
  ConflictGraph graph_;
  std::vector<EditDelta> undo_;
};

}  // namespace pflp
