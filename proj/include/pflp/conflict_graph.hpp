#pragma once

#include <span>
#include <utility>
#include <vector>

#include "pflp/model.hpp"

namespace pflp {

using Edge = std::pair<CandidateId, CandidateId>;  // first < second

inline Edge make_edge(CandidateId a, CandidateId b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

// Weighted conflict graph over label candidates. Storage is indexed by the
// candidate id value, so per-vertex scratch arrays in the solvers can be sized
// with id_bound() and addressed directly.
class ConflictGraph {
 public:
  struct Vertex {
    FeatureId feature;
    Slot slot = Slot::AboveRight;
    double weight = 1.0;
    bool fixed = false;

    friend bool operator==(const Vertex&, const Vertex&) = default;
  };

  void add_vertex(CandidateId id, const Vertex& v);
  // Drops the vertex together with its incident edges.
  void remove_vertex(CandidateId id);
  // Returns false when the edge already exists.
  bool add_edge(CandidateId a, CandidateId b);
  bool remove_edge(CandidateId a, CandidateId b);

  bool contains(CandidateId id) const {
    return id.value < table_.size() && table_[id.value].live;
  }
  bool has_edge(CandidateId a, CandidateId b) const;

  const Vertex& vertex(CandidateId id) const;
  double weight(CandidateId id) const { return vertex(id).weight; }
  FeatureId feature(CandidateId id) const { return vertex(id).feature; }
  void set_weight(CandidateId id, double w);
  void set_fixed(CandidateId id, bool fixed);

  std::span<const CandidateId> neighbors(CandidateId id) const;
  std::size_t degree(CandidateId id) const { return neighbors(id).size(); }

  std::size_t num_vertices() const { return vertex_count_; }
  std::size_t num_edges() const { return edge_count_; }
  std::uint32_t id_bound() const { return static_cast<std::uint32_t>(table_.size()); }

  // Live vertex ids in ascending order.
  std::vector<CandidateId> vertices() const;
  // All edges, normalized and sorted.
  std::vector<Edge> edges() const;
  std::vector<CandidateId> fixed_vertices() const;

  // Throws std::logic_error when the adjacency index is not symmetric,
  // irreflexive and sorted, or when counts disagree.
  void check_invariants() const;

  friend bool operator==(const ConflictGraph& a, const ConflictGraph& b);

 private:
  struct Entry {
    bool live = false;
    Vertex data;
    std::vector<CandidateId> adj;  // sorted
  };

  Entry& entry(CandidateId id);
  const Entry& entry(CandidateId id) const;

  std::vector<Entry> table_;
  std::size_t vertex_count_ = 0;
  std::size_t edge_count_ = 0;
};

// Builds a labeling from a set of ids, sorting it and summing weights.
// Throws NotFound for ids missing from the graph.
Labeling make_labeling(const ConflictGraph& graph, std::vector<CandidateId> ids);

// Recomputes the weight of a labeling on `graph`; unknown ids contribute 0.
double labeling_weight(const ConflictGraph& graph, const Labeling& labeling);

struct Violation {
  enum class Kind { UnknownCandidate, Conflict, SameFeature };
  Kind kind;
  CandidateId first;
  CandidateId second;  // invalid for UnknownCandidate
};

// Empty result iff the labeling is conflict-free and has at most one label
// per feature. One record per offending pair or unknown id.
std::vector<Violation> validate_labeling(const ConflictGraph& graph, const Labeling& labeling);

// True when no live unselected vertex could be added without a conflict.
bool is_maximal(const ConflictGraph& graph, const Labeling& labeling);

}  // namespace pflp
