#include "pflp/json_io.hpp"

#include "pflp/errors.hpp"

namespace pflp {
namespace {

using nlohmann::json;

json vertex_json(const VertexRecord& r) {
  return {{"id", r.id.value},
          {"feature", r.data.feature.value},
          {"slot", to_string(r.data.slot)},
          {"weight", r.data.weight},
          {"fixed", r.data.fixed}};
}

Slot slot_from(const json& j) {
  const auto name = j.get<std::string>();
  const auto slot = parse_slot(name);
  if (!slot) throw InvalidInput("unknown slot '" + name + "'");
  return *slot;
}

VertexRecord vertex_from(const json& j) {
  VertexRecord r;
  r.id = CandidateId(j.at("id").get<std::uint32_t>());
  r.data.feature = FeatureId(j.at("feature").get<std::uint32_t>());
  r.data.slot = slot_from(j.at("slot"));
  r.data.weight = j.at("weight").get<double>();
  r.data.fixed = j.at("fixed").get<bool>();
  return r;
}

json edges_json(const std::vector<Edge>& edges) {
  json out = json::array();
  for (const auto& [a, b] : edges) out.push_back({a.value, b.value});
  return out;
}

std::vector<Edge> edges_from(const json& j) {
  std::vector<Edge> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw InvalidInput("edge must be a pair of ids");
    out.push_back(make_edge(CandidateId(e[0].get<std::uint32_t>()), CandidateId(e[1].get<std::uint32_t>())));
  }
  return out;
}

EditTarget target_from(const json& j) {
  if (j.contains("candidate")) return CandidateId(j.at("candidate").get<std::uint32_t>());
  if (j.contains("feature")) return FeatureId(j.at("feature").get<std::uint32_t>());
  throw InvalidInput("edit needs a 'feature' or 'candidate' target");
}

CandidateId candidate_from(const json& j) { return CandidateId(j.at("candidate").get<std::uint32_t>()); }

}  // namespace

void to_json(json& j, const Rect& r) { j = {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; }

void from_json(const json& j, Rect& r) {
  r.x = j.at("x").get<double>();
  r.y = j.at("y").get<double>();
  r.w = j.at("w").get<double>();
  r.h = j.at("h").get<double>();
}

void to_json(json& j, const FeaturePoint& f) {
  j = {{"id", f.id.value}, {"key", f.key},         {"name", f.name},      {"lon", f.lon},
       {"lat", f.lat},     {"weight", f.base_weight}, {"deleted", f.deleted}};
}

void from_json(const json& j, FeaturePoint& f) {
  f.id = FeatureId(j.at("id").get<std::uint32_t>());
  f.key = j.value("key", std::to_string(f.id.value));
  f.name = j.at("name").get<std::string>();
  f.lon = j.at("lon").get<double>();
  f.lat = j.at("lat").get<double>();
  f.base_weight = j.value("weight", 1.0);
  f.deleted = j.value("deleted", false);
}

void to_json(json& j, const LabelCandidate& c) {
  j = {{"id", c.id.value},
       {"feature", c.feature.value},
       {"slot", to_string(c.slot)},
       {"rect", c.rect},
       {"weight", c.weight},
       {"fixed", c.fixed},
       {"deleted", c.deleted},
       {"font_size", c.style.font_size},
       {"padding", c.style.padding},
       {"text_lines", c.style.text_lines},
       {"box_visible", c.box_visible},
       {"shrunk", c.shrunk}};
}

void from_json(const json& j, LabelCandidate& c) {
  c.id = CandidateId(j.at("id").get<std::uint32_t>());
  c.feature = FeatureId(j.at("feature").get<std::uint32_t>());
  c.slot = slot_from(j.at("slot"));
  c.rect = j.at("rect").get<Rect>();
  c.weight = j.at("weight").get<double>();
  c.fixed = j.value("fixed", false);
  c.deleted = j.value("deleted", false);
  c.style.font_size = j.at("font_size").get<double>();
  c.style.padding = j.value("padding", 0.0);
  c.style.text_lines = j.value("text_lines", 1);
  c.box_visible = j.value("box_visible", true);
  c.shrunk = j.value("shrunk", false);
}

void to_json(json& j, const Labeling& l) {
  json ids = json::array();
  for (CandidateId v : l.selected) ids.push_back(v.value);
  j = {{"selected", ids}, {"total_weight", l.total_weight}, {"proven_optimal", l.proven_optimal}};
}

void to_json(json& j, const StabilityReport& r) {
  j = {{"ratio", r.ratio}, {"kept", r.kept}, {"added", r.added}, {"dropped", r.dropped}};
}

void to_json(json& j, const EditDelta& d) {
  json removed_v = json::array(), added_v = json::array(), weights = json::array(), fixations = json::array(),
       candidates = json::array(), features = json::array();
  for (const auto& r : d.removed_vertices) removed_v.push_back(vertex_json(r));
  for (const auto& r : d.added_vertices) added_v.push_back(vertex_json(r));
  for (const auto& c : d.weight_changes) weights.push_back({{"id", c.id.value}, {"before", c.before}, {"after", c.after}});
  for (const auto& c : d.fixation_changes) {
    fixations.push_back({{"id", c.id.value}, {"before", c.before}, {"after", c.after}});
  }
  for (const auto& c : d.candidates) {
    candidates.push_back({{"before", c.before ? json(*c.before) : json(nullptr)},
                          {"after", c.after ? json(*c.after) : json(nullptr)}});
  }
  for (const auto& f : d.features) features.push_back({{"before", f.before}, {"after", f.after}});
  j = {{"removed_vertices", removed_v},
       {"added_vertices", added_v},
       {"removed_edges", edges_json(d.removed_edges)},
       {"added_edges", edges_json(d.added_edges)},
       {"weight_changes", weights},
       {"fixation_changes", fixations},
       {"candidates", candidates},
       {"features", features}};
}

void from_json(const json& j, EditDelta& d) {
  d = EditDelta{};
  for (const auto& r : j.at("removed_vertices")) d.removed_vertices.push_back(vertex_from(r));
  for (const auto& r : j.at("added_vertices")) d.added_vertices.push_back(vertex_from(r));
  d.removed_edges = edges_from(j.at("removed_edges"));
  d.added_edges = edges_from(j.at("added_edges"));
  for (const auto& c : j.at("weight_changes")) {
    d.weight_changes.push_back(
        {CandidateId(c.at("id").get<std::uint32_t>()), c.at("before").get<double>(), c.at("after").get<double>()});
  }
  for (const auto& c : j.at("fixation_changes")) {
    d.fixation_changes.push_back(
        {CandidateId(c.at("id").get<std::uint32_t>()), c.at("before").get<bool>(), c.at("after").get<bool>()});
  }
  for (const auto& c : j.at("candidates")) {
    EditDelta::CandidateChange ch;
    if (!c.at("before").is_null()) ch.before = c.at("before").get<LabelCandidate>();
    if (!c.at("after").is_null()) ch.after = c.at("after").get<LabelCandidate>();
    d.candidates.push_back(std::move(ch));
  }
  for (const auto& f : j.at("features")) {
    d.features.push_back({f.at("before").get<FeaturePoint>(), f.at("after").get<FeaturePoint>()});
  }
}

json delta_summary(const EditDelta& d) {
  json touched = json::array();
  for (const auto& c : d.candidates) touched.push_back((c.after ? c.after->id : c.before->id).value);
  json added = json::array(), removed = json::array();
  for (const auto& r : d.added_vertices) added.push_back(r.id.value);
  for (const auto& r : d.removed_vertices) removed.push_back(r.id.value);
  return {{"added_vertices", added},
          {"removed_vertices", removed},
          {"added_edges", d.added_edges.size()},
          {"removed_edges", d.removed_edges.size()},
          {"weight_changes", d.weight_changes.size()},
          {"fixation_changes", d.fixation_changes.size()},
          {"touched_candidates", touched},
          {"empty", d.empty()}};
}

Edit edit_from_json(const json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "set_font_size") return SetFontSize{target_from(j), j.at("font_size").get<double>()};
    if (kind == "set_text") return SetText{target_from(j), j.at("text").get<std::string>()};
    if (kind == "set_line_breaks") return SetLineBreaks{target_from(j), j.at("lines").get<int>()};
    if (kind == "set_padding") return SetPadding{target_from(j), j.at("padding").get<double>()};
    if (kind == "set_box_visibility") return SetBoxVisibility{target_from(j), j.at("visible").get<bool>()};
    if (kind == "delete_feature") return DeleteFeature{target_from(j)};
    if (kind == "delete_candidate") return DeleteCandidate{candidate_from(j)};
    if (kind == "fixate_candidate") return FixateCandidate{candidate_from(j)};
    if (kind == "unfixate_candidate") return UnfixateCandidate{candidate_from(j)};
    if (kind == "set_candidate_weight") return SetCandidateWeight{candidate_from(j), j.at("weight").get<double>()};
    if (kind == "drag_candidate") {
      return DragCandidate{candidate_from(j), Point{j.at("x").get<double>(), j.at("y").get<double>()}};
    }
    throw InvalidInput("unknown edit kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed edit: ") + e.what());
  }
}

}  // namespace pflp
