#include "pflp/edits.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "pflp/errors.hpp"

namespace pflp {
namespace {

std::uint64_t edge_key(Edge e) {
  e = make_edge(e.first, e.second);
  return (static_cast<std::uint64_t>(e.first.value) << 32) | e.second.value;
}

[[noreturn]] void reject(const std::string& why) { throw InvalidInput("inconsistent delta: " + why); }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

std::string_view edit_kind(const Edit& edit) {
  return std::visit(Overloaded{
                        [](const SetFontSize&) { return std::string_view("set_font_size"); },
                        [](const SetText&) { return std::string_view("set_text"); },
                        [](const SetLineBreaks&) { return std::string_view("set_line_breaks"); },
                        [](const DeleteFeature&) { return std::string_view("delete_feature"); },
                        [](const DeleteCandidate&) { return std::string_view("delete_candidate"); },
                        [](const FixateCandidate&) { return std::string_view("fixate_candidate"); },
                        [](const UnfixateCandidate&) { return std::string_view("unfixate_candidate"); },
                        [](const SetCandidateWeight&) { return std::string_view("set_candidate_weight"); },
                        [](const DragCandidate&) { return std::string_view("drag_candidate"); },
                        [](const SetPadding&) { return std::string_view("set_padding"); },
                        [](const SetBoxVisibility&) { return std::string_view("set_box_visibility"); },
                    },
                    edit);
}

void apply_delta(ConflictGraph& graph, const EditDelta& delta) {
  std::unordered_set<std::uint64_t> removed_edges;
  std::unordered_map<std::uint32_t, std::size_t> removed_degree;
  for (const auto& e : delta.removed_edges) {
    if (!graph.contains(e.first) || !graph.contains(e.second) || !graph.has_edge(e.first, e.second)) {
      reject("removed edge " + std::to_string(e.first.value) + "-" + std::to_string(e.second.value) +
             " does not exist");
    }
    if (!removed_edges.insert(edge_key(e)).second) reject("edge removed twice");
    ++removed_degree[e.first.value];
    ++removed_degree[e.second.value];
  }

  std::unordered_set<std::uint32_t> removed_vertices;
  for (const auto& r : delta.removed_vertices) {
    if (!graph.contains(r.id)) reject("removed vertex " + std::to_string(r.id.value) + " does not exist");
    if (!removed_vertices.insert(r.id.value).second) reject("vertex removed twice");
    if (graph.degree(r.id) != removed_degree[r.id.value]) {
      reject("removed vertex " + std::to_string(r.id.value) + " keeps incident edges");
    }
  }

  std::unordered_set<std::uint32_t> added_vertices;
  for (const auto& r : delta.added_vertices) {
    if (graph.contains(r.id)) reject("added vertex " + std::to_string(r.id.value) + " already exists");
    if (!added_vertices.insert(r.id.value).second) reject("vertex added twice");
    if (!(r.data.weight > 0.0) || !std::isfinite(r.data.weight)) reject("added vertex weight must be positive");
  }

  auto exists_after = [&](CandidateId v) {
    return added_vertices.count(v.value) != 0 || (graph.contains(v) && removed_vertices.count(v.value) == 0);
  };
  std::unordered_set<std::uint64_t> added_edges;
  for (const auto& e : delta.added_edges) {
    if (e.first == e.second) reject("self-loop");
    if (!exists_after(e.first) || !exists_after(e.second)) {
      reject("edge " + std::to_string(e.first.value) + "-" + std::to_string(e.second.value) +
             " references a missing vertex");
    }
    const bool present = graph.contains(e.first) && graph.contains(e.second) && graph.has_edge(e.first, e.second);
    if (present && removed_edges.count(edge_key(e)) == 0) reject("added edge already exists");
    if (!added_edges.insert(edge_key(e)).second) reject("edge added twice");
  }
  for (const auto& c : delta.weight_changes) {
    if (!exists_after(c.id)) reject("weight change on missing vertex " + std::to_string(c.id.value));
    if (!(c.after > 0.0) || !std::isfinite(c.after)) reject("weight must be positive");
  }
  for (const auto& c : delta.fixation_changes) {
    if (!exists_after(c.id)) reject("fixation change on missing vertex " + std::to_string(c.id.value));
  }

  for (const auto& e : delta.removed_edges) graph.remove_edge(e.first, e.second);
  for (const auto& r : delta.removed_vertices) graph.remove_vertex(r.id);
  for (const auto& r : delta.added_vertices) graph.add_vertex(r.id, r.data);
  for (const auto& e : delta.added_edges) graph.add_edge(e.first, e.second);
  for (const auto& c : delta.weight_changes) graph.set_weight(c.id, c.after);
  for (const auto& c : delta.fixation_changes) graph.set_fixed(c.id, c.after);
}

EditDelta invert(const EditDelta& delta) {
  EditDelta inv;
  inv.removed_vertices = delta.added_vertices;
  inv.added_vertices = delta.removed_vertices;
  inv.removed_edges = delta.added_edges;
  inv.added_edges = delta.removed_edges;
  for (const auto& c : delta.weight_changes) inv.weight_changes.push_back({c.id, c.after, c.before});
  for (const auto& c : delta.fixation_changes) inv.fixation_changes.push_back({c.id, c.after, c.before});
  for (auto it = delta.candidates.rbegin(); it != delta.candidates.rend(); ++it) {
    inv.candidates.push_back({it->after, it->before});
  }
  for (auto it = delta.features.rbegin(); it != delta.features.rend(); ++it) {
    inv.features.push_back({it->after, it->before});
  }
  return inv;
}

}  // namespace pflp
