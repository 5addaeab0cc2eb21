#include "pflp/conflict_graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "pflp/errors.hpp"

namespace pflp {

ConflictGraph::Entry& ConflictGraph::entry(CandidateId id) {
  if (!contains(id)) throw NotFound("unknown candidate " + std::to_string(id.value), id.value);
  return table_[id.value];
}

const ConflictGraph::Entry& ConflictGraph::entry(CandidateId id) const {
  if (!contains(id)) throw NotFound("unknown candidate " + std::to_string(id.value), id.value);
  return table_[id.value];
}

void ConflictGraph::add_vertex(CandidateId id, const Vertex& v) {
  if (!id.valid()) throw InvalidInput("invalid candidate id");
  if (!(v.weight > 0.0)) throw InvalidInput("candidate weight must be positive");
  if (id.value >= table_.size()) table_.resize(id.value + 1);
  Entry& e = table_[id.value];
  if (e.live) throw InvalidInput("candidate " + std::to_string(id.value) + " already present");
  e.live = true;
  e.data = v;
  e.adj.clear();
  ++vertex_count_;
}

void ConflictGraph::remove_vertex(CandidateId id) {
  Entry& e = entry(id);
  for (CandidateId n : e.adj) {
    auto& other = table_[n.value].adj;
    other.erase(std::lower_bound(other.begin(), other.end(), id));
  }
  edge_count_ -= e.adj.size();
  e.adj.clear();
  e.adj.shrink_to_fit();
  e.live = false;
  --vertex_count_;
}

bool ConflictGraph::add_edge(CandidateId a, CandidateId b) {
  if (a == b) throw InvalidInput("self-loop on candidate " + std::to_string(a.value));
  Entry& ea = entry(a);
  Entry& eb = entry(b);
  auto it = std::lower_bound(ea.adj.begin(), ea.adj.end(), b);
  if (it != ea.adj.end() && *it == b) return false;
  ea.adj.insert(it, b);
  eb.adj.insert(std::lower_bound(eb.adj.begin(), eb.adj.end(), a), a);
  ++edge_count_;
  return true;
}

bool ConflictGraph::remove_edge(CandidateId a, CandidateId b) {
  Entry& ea = entry(a);
  Entry& eb = entry(b);
  auto it = std::lower_bound(ea.adj.begin(), ea.adj.end(), b);
  if (it == ea.adj.end() || *it != b) return false;
  ea.adj.erase(it);
  eb.adj.erase(std::lower_bound(eb.adj.begin(), eb.adj.end(), a));
  --edge_count_;
  return true;
}

bool ConflictGraph::has_edge(CandidateId a, CandidateId b) const {
  if (!contains(a) || !contains(b)) return false;
  const auto& adj = table_[a.value].adj;
  return std::binary_search(adj.begin(), adj.end(), b);
}

const ConflictGraph::Vertex& ConflictGraph::vertex(CandidateId id) const { return entry(id).data; }

void ConflictGraph::set_weight(CandidateId id, double w) {
  if (!(w > 0.0)) throw InvalidInput("candidate weight must be positive");
  entry(id).data.weight = w;
}

void ConflictGraph::set_fixed(CandidateId id, bool fixed) { entry(id).data.fixed = fixed; }

std::span<const CandidateId> ConflictGraph::neighbors(CandidateId id) const {
  return entry(id).adj;
}

std::vector<CandidateId> ConflictGraph::vertices() const {
  std::vector<CandidateId> out;
  out.reserve(vertex_count_);
  for (std::uint32_t i = 0; i < table_.size(); ++i) {
    if (table_[i].live) out.emplace_back(i);
  }
  return out;
}

std::vector<Edge> ConflictGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::uint32_t i = 0; i < table_.size(); ++i) {
    if (!table_[i].live) continue;
    for (CandidateId n : table_[i].adj) {
      if (n.value > i) out.emplace_back(CandidateId{i}, n);
    }
  }
  return out;
}

std::vector<CandidateId> ConflictGraph::fixed_vertices() const {
  std::vector<CandidateId> out;
  for (std::uint32_t i = 0; i < table_.size(); ++i) {
    if (table_[i].live && table_[i].data.fixed) out.emplace_back(i);
  }
  return out;
}

void ConflictGraph::check_invariants() const {
  std::size_t vertices = 0;
  std::size_t half_edges = 0;
  for (std::uint32_t i = 0; i < table_.size(); ++i) {
    const Entry& e = table_[i];
    if (!e.live) {
      if (!e.adj.empty()) throw std::logic_error("dead vertex keeps adjacency");
      continue;
    }
    ++vertices;
    half_edges += e.adj.size();
    if (!std::is_sorted(e.adj.begin(), e.adj.end()) ||
        std::adjacent_find(e.adj.begin(), e.adj.end()) != e.adj.end()) {
      throw std::logic_error("adjacency of " + std::to_string(i) + " not sorted/unique");
    }
    for (CandidateId n : e.adj) {
      if (n.value == i) throw std::logic_error("self-loop at " + std::to_string(i));
      if (!contains(n)) throw std::logic_error("edge to dead vertex " + std::to_string(n.value));
      const auto& back = table_[n.value].adj;
      if (!std::binary_search(back.begin(), back.end(), CandidateId{i})) {
        throw std::logic_error("asymmetric edge " + std::to_string(i) + "-" +
                               std::to_string(n.value));
      }
    }
  }
  if (vertices != vertex_count_ || half_edges != 2 * edge_count_) {
    throw std::logic_error("vertex/edge counters out of sync");
  }
}

bool operator==(const ConflictGraph& a, const ConflictGraph& b) {
  if (a.vertex_count_ != b.vertex_count_ || a.edge_count_ != b.edge_count_) return false;
  const std::size_t n = std::max(a.table_.size(), b.table_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const bool la = i < a.table_.size() && a.table_[i].live;
    const bool lb = i < b.table_.size() && b.table_[i].live;
    if (la != lb) return false;
    if (!la) continue;
    if (!(a.table_[i].data == b.table_[i].data) || a.table_[i].adj != b.table_[i].adj) {
      return false;
    }
  }
  return true;
}

Labeling make_labeling(const ConflictGraph& graph, std::vector<CandidateId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  Labeling out;
  for (CandidateId id : ids) out.total_weight += graph.weight(id);
  out.selected = std::move(ids);
  return out;
}

double labeling_weight(const ConflictGraph& graph, const Labeling& labeling) {
  double total = 0.0;
  for (CandidateId id : labeling.selected) {
    if (graph.contains(id)) total += graph.weight(id);
  }
  return total;
}

std::vector<Violation> validate_labeling(const ConflictGraph& graph, const Labeling& labeling) {
  std::vector<Violation> out;
  std::vector<char> selected(graph.id_bound(), 0);
  std::unordered_map<FeatureId, std::vector<CandidateId>> by_feature;
  for (CandidateId id : labeling.selected) {
    if (!graph.contains(id)) {
      out.push_back({Violation::Kind::UnknownCandidate, id, CandidateId{}});
      continue;
    }
    selected[id.value] = 1;
    by_feature[graph.feature(id)].push_back(id);
  }
  for (CandidateId id : labeling.selected) {
    if (!graph.contains(id)) continue;
    for (CandidateId n : graph.neighbors(id)) {
      if (n > id && selected[n.value]) {
        const bool same = graph.feature(n) == graph.feature(id);
        out.push_back({same ? Violation::Kind::SameFeature : Violation::Kind::Conflict, id, n});
      }
    }
  }
  // Same-feature pairs the graph failed to connect still violate one-per-feature.
  for (auto& [feature, ids] : by_feature) {
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        if (!graph.has_edge(ids[i], ids[j])) {
          out.push_back({Violation::Kind::SameFeature, ids[i], ids[j]});
        }
      }
    }
  }
  return out;
}

bool is_maximal(const ConflictGraph& graph, const Labeling& labeling) {
  std::vector<char> selected(graph.id_bound(), 0);
  std::unordered_map<FeatureId, bool> labeled;
  for (CandidateId id : labeling.selected) {
    if (!graph.contains(id)) continue;
    selected[id.value] = 1;
    labeled[graph.feature(id)] = true;
  }
  for (CandidateId v : graph.vertices()) {
    if (selected[v.value] || labeled.count(graph.feature(v))) continue;
    bool blocked = false;
    for (CandidateId n : graph.neighbors(v)) {
      if (selected[n.value]) {
        blocked = true;
        break;
      }
    }
    if (!blocked) return false;
  }
  return true;
}

}  // namespace pflp
