#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pflp/conflict_graph.hpp"
#include "pflp/model.hpp"

namespace pflp {

// Style edits accept either a feature or one of its candidates; they always
// apply to the whole feature.
using EditTarget = std::variant<FeatureId, CandidateId>;

struct SetFontSize {
  EditTarget target;
  double font_size = 10.0;
};
struct SetText {
  EditTarget target;
  std::string text;
};
struct SetLineBreaks {
  EditTarget target;
  int lines = 1;
};
struct SetPadding {
  EditTarget target;
  double padding = 0.0;
};
struct SetBoxVisibility {
  EditTarget target;
  bool visible = true;
};
struct DeleteFeature {
  EditTarget target;
};
struct DeleteCandidate {
  CandidateId candidate;
};
struct FixateCandidate {
  CandidateId candidate;
};
struct UnfixateCandidate {
  CandidateId candidate;
};
struct SetCandidateWeight {
  CandidateId candidate;
  double weight = 1.0;
};
// Moves the label to a free position; `top_left` is the new minimum corner.
struct DragCandidate {
  CandidateId candidate;
  Point top_left;
};

using Edit = std::variant<SetFontSize, SetText, SetLineBreaks, DeleteFeature, DeleteCandidate, FixateCandidate,
                          UnfixateCandidate, SetCandidateWeight, DragCandidate, SetPadding, SetBoxVisibility>;

std::string_view edit_kind(const Edit& edit);

struct VertexRecord {
  CandidateId id;
  ConflictGraph::Vertex data;
};

// Graph-level change of one edit plus the candidate and feature records it
// touched, so the owning instance can be rolled back.
struct EditDelta {
  struct WeightChange {
    CandidateId id;
    double before = 0.0;
    double after = 0.0;
  };
  struct FixationChange {
    CandidateId id;
    bool before = false;
    bool after = false;
  };
  struct CandidateChange {
    std::optional<LabelCandidate> before;  // nullopt: created by the edit
    std::optional<LabelCandidate> after;   // nullopt: the creation is undone
  };
  struct FeatureChange {
    FeaturePoint before;
    FeaturePoint after;
  };

  std::vector<VertexRecord> removed_vertices;
  std::vector<VertexRecord> added_vertices;
  std::vector<Edge> removed_edges;
  std::vector<Edge> added_edges;
  std::vector<WeightChange> weight_changes;
  std::vector<FixationChange> fixation_changes;

  std::vector<CandidateChange> candidates;
  std::vector<FeatureChange> features;

  bool graph_empty() const {
    return removed_vertices.empty() && added_vertices.empty() && removed_edges.empty() && added_edges.empty() &&
           weight_changes.empty() && fixation_changes.empty();
  }
  bool empty() const { return graph_empty() && candidates.empty() && features.empty(); }
};

// Applies the graph part of `delta`: edges out, vertices out, vertices in,
// edges in, then weights and fixations. Everything is checked first; an
// inconsistent delta throws InvalidInput and leaves `graph` untouched.
void apply_delta(ConflictGraph& graph, const EditDelta& delta);

EditDelta invert(const EditDelta& delta);

}  // namespace pflp
