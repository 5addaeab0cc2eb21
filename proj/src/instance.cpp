#include "pflp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "pflp/errors.hpp"

namespace pflp {
namespace {

constexpr double kMaxFontSize = 1000.0;
constexpr double kMaxPadding = 1000.0;
constexpr int kMaxLines = 100;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void check_range(double v, double lo_exclusive, double hi, const char* what) {
  if (!std::isfinite(v) || !(v > lo_exclusive) || v > hi) {
    throw InvalidInput(std::string(what) + " out of range");
  }
}

}  // namespace

Instance::Instance(std::vector<FeaturePoint> features, const InstanceConfig& config)
    : features_(std::move(features)), config_(config) {
  if (config_.zoom < 0 || config_.zoom > kMaxZoom) throw InvalidInput("zoom must be in [0, 22]");
  for (std::size_t i = 0; i < features_.size(); ++i) {
    const auto& f = features_[i];
    if (f.id.value != i) throw InvalidInput("feature ids must be consecutive from 0");
    if (f.deleted) continue;
    const LabelBox box = measure_label(f.name, config_.style.font_size, config_.style.padding,
                                       config_.style.text_lines, config_.metrics);
    for (auto& c : generate_candidates(f, box, config_.model, config_.zoom, config_.style)) {
      c.id = CandidateId(static_cast<std::uint32_t>(candidates_.size()));
      candidates_.push_back(c);
    }
  }
  index_candidates();
}

Instance::Instance(std::vector<FeaturePoint> features, std::vector<LabelCandidate> candidates,
                   const InstanceConfig& config)
    : features_(std::move(features)), candidates_(std::move(candidates)), config_(config) {
  if (config_.zoom < 0 || config_.zoom > kMaxZoom) throw InvalidInput("zoom must be in [0, 22]");
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].id.value != i) throw InvalidInput("feature ids must be consecutive from 0");
  }
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    const auto& c = candidates_[i];
    if (c.id.value != i) throw InvalidInput("candidate ids must be consecutive from 0");
    if (c.feature.value >= features_.size()) throw InvalidInput("candidate refers to an unknown feature");
    if (!(c.weight > 0.0) || !(c.rect.w > 0.0) || !(c.rect.h > 0.0)) {
      throw InvalidInput("candidate " + std::to_string(i) + " has a non-positive weight or extent");
    }
  }
  index_candidates();
}

void Instance::index_candidates() {
  anchors_.clear();
  for (const auto& f : features_) anchors_.push_back(project(f.lon, f.lat, config_.zoom));
  members_.assign(features_.size(), {});
  for (const auto& c : candidates_) members_[c.feature.value].push_back(c.id);
  grid_ = SpatialGrid(median_diagonal(candidates_));
  for (const auto& c : candidates_) {
    if (c.live()) grid_.insert(c.id, c.rect);
  }
  graph_ = build_conflict_graph(candidates_);
}

const FeaturePoint& Instance::feature(FeatureId id) const {
  if (id.value >= features_.size()) throw NotFound("unknown feature " + std::to_string(id.value), id.value);
  return features_[id.value];
}

const LabelCandidate& Instance::candidate(CandidateId id) const {
  if (id.value >= candidates_.size()) throw NotFound("unknown candidate " + std::to_string(id.value), id.value);
  return candidates_[id.value];
}

const LabelCandidate& Instance::live_candidate(CandidateId id) const {
  const auto& c = candidate(id);
  if (!c.live()) throw NotFound("candidate " + std::to_string(id.value) + " is deleted", id.value);
  return c;
}

std::vector<CandidateId> Instance::live_candidates_of(FeatureId id) const {
  feature(id);
  std::vector<CandidateId> out;
  for (CandidateId c : members_[id.value]) {
    if (candidates_[c.value].live()) out.push_back(c);
  }
  return out;
}

std::vector<CandidateId> Instance::live_candidates() const {
  std::vector<CandidateId> out;
  for (const auto& c : candidates_) {
    if (c.live()) out.push_back(c.id);
  }
  return out;
}

std::size_t Instance::live_feature_count() const {
  return static_cast<std::size_t>(
      std::count_if(features_.begin(), features_.end(), [](const FeaturePoint& f) { return !f.deleted; }));
}

ConflictGraph Instance::rebuild_graph() const { return build_conflict_graph(candidates_); }

FeatureId Instance::resolve(const EditTarget& target) const {
  const FeatureId f = std::visit(Overloaded{
                                     [&](FeatureId id) { return feature(id).id; },
                                     [&](CandidateId id) { return live_candidate(id).feature; },
                                 },
                                 target);
  if (features_[f.value].deleted) throw NotFound("feature " + std::to_string(f.value) + " is deleted", f.value);
  if (members_[f.value].empty()) throw NotFound("feature " + std::to_string(f.value) + " has no labels", f.value);
  return f;
}

void Instance::diff_edges(const std::vector<LabelCandidate>& changed, EditDelta& delta) const {
  if (changed.empty()) return;
  std::unordered_set<std::uint32_t> changed_ids;
  for (const auto& c : changed) changed_ids.insert(c.id.value);

  std::vector<Edge> now;
  for (std::size_t i = 0; i < changed.size(); ++i) {
    const auto& c = changed[i];
    for (CandidateId m : members_[c.feature.value]) {
      if (m != c.id && candidates_[m.value].live() && changed_ids.count(m.value) == 0) now.push_back(make_edge(c.id, m));
    }
    for (CandidateId o : grid_.query(c.rect)) {
      if (changed_ids.count(o.value) != 0) continue;
      if (rects_conflict(c.rect, candidates_[o.value].rect)) now.push_back(make_edge(c.id, o));
    }
    for (std::size_t j = i + 1; j < changed.size(); ++j) {
      const auto& d = changed[j];
      if (d.feature == c.feature || rects_conflict(c.rect, d.rect)) now.push_back(make_edge(c.id, d.id));
    }
  }
  std::sort(now.begin(), now.end());
  now.erase(std::unique(now.begin(), now.end()), now.end());

  std::vector<Edge> before;
  for (const auto& c : changed) {
    if (!graph_.contains(c.id)) continue;
    for (CandidateId n : graph_.neighbors(c.id)) before.push_back(make_edge(c.id, n));
  }
  std::sort(before.begin(), before.end());
  before.erase(std::unique(before.begin(), before.end()), before.end());

  std::set_difference(before.begin(), before.end(), now.begin(), now.end(), std::back_inserter(delta.removed_edges));
  std::set_difference(now.begin(), now.end(), before.begin(), before.end(), std::back_inserter(delta.added_edges));
}

void Instance::remove_candidates(const std::vector<CandidateId>& ids, EditDelta& delta) const {
  std::vector<Edge> edges;
  for (CandidateId id : ids) {
    const auto& c = candidates_[id.value];
    delta.removed_vertices.push_back({id, graph_.vertex(id)});
    for (CandidateId n : graph_.neighbors(id)) edges.push_back(make_edge(id, n));
    LabelCandidate after = c;
    after.deleted = true;
    delta.candidates.push_back({c, after});
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  delta.removed_edges.insert(delta.removed_edges.end(), edges.begin(), edges.end());
}

EditDelta Instance::restyle(FeatureId f, const LabelStyle& style, const std::string& text, bool mark_shrunk) const {
  EditDelta delta;
  const LabelBox box = measure_label(text, style.font_size, style.padding, style.text_lines, config_.metrics);
  std::vector<LabelCandidate> moved;
  for (CandidateId id : members_[f.value]) {
    const auto& c = candidates_[id.value];
    LabelCandidate n = c;
    n.style = style;
    if (mark_shrunk) n.shrunk = true;
    if (c.slot == Slot::Free) {
      n.rect = Rect{c.rect.x, c.rect.y, box.w, box.h};
    } else {
      n.rect = place_box(anchors_[f.value], box, c.slot);
    }
    if (n == c) continue;
    delta.candidates.push_back({c, n});
    if (c.live() && !(n.rect == c.rect)) moved.push_back(n);
  }
  if (text != features_[f.value].name) {
    FeaturePoint after = features_[f.value];
    after.name = text;
    delta.features.push_back({features_[f.value], after});
  }
  diff_edges(moved, delta);
  return delta;
}

EditDelta Instance::preview(const Edit& edit) const {
  auto style_of = [&](FeatureId f) { return candidates_[members_[f.value].front().value].style; };

  return std::visit(
      Overloaded{
          [&](const SetFontSize& e) {
            check_range(e.font_size, 0.0, kMaxFontSize, "font size");
            const FeatureId f = resolve(e.target);
            LabelStyle style = style_of(f);
            if (e.font_size == style.font_size) return EditDelta{};
            const bool shrunk = candidates_[members_[f.value].front().value].shrunk;
            if (config_.shrink_precedence && shrunk && e.font_size > style.font_size) return EditDelta{};
            const bool shrinking = e.font_size < style.font_size;
            style.font_size = e.font_size;
            return restyle(f, style, features_[f.value].name, shrinking);
          },
          [&](const SetText& e) {
            if (e.text.empty()) throw InvalidInput("label text must not be empty");
            const FeatureId f = resolve(e.target);
            if (e.text == features_[f.value].name) return EditDelta{};
            return restyle(f, style_of(f), e.text, false);
          },
          [&](const SetLineBreaks& e) {
            if (e.lines < 1 || e.lines > kMaxLines) throw InvalidInput("line count out of range");
            const FeatureId f = resolve(e.target);
            LabelStyle style = style_of(f);
            if (style.text_lines == e.lines) return EditDelta{};
            style.text_lines = e.lines;
            return restyle(f, style, features_[f.value].name, false);
          },
          [&](const SetPadding& e) {
            if (!std::isfinite(e.padding) || e.padding < 0.0 || e.padding > kMaxPadding) {
              throw InvalidInput("padding out of range");
            }
            const FeatureId f = resolve(e.target);
            LabelStyle style = style_of(f);
            if (style.padding == e.padding) return EditDelta{};
            style.padding = e.padding;
            return restyle(f, style, features_[f.value].name, false);
          },
          [&](const SetBoxVisibility& e) {
            const FeatureId f = resolve(e.target);
            EditDelta delta;
            for (CandidateId id : members_[f.value]) {
              const auto& c = candidates_[id.value];
              if (c.box_visible == e.visible) continue;
              LabelCandidate n = c;
              n.box_visible = e.visible;
              delta.candidates.push_back({c, n});
            }
            return delta;
          },
          [&](const DeleteFeature& e) {
            const FeatureId f = resolve(e.target);
            EditDelta delta;
            remove_candidates(live_candidates_of(f), delta);
            FeaturePoint after = features_[f.value];
            after.deleted = true;
            delta.features.push_back({features_[f.value], after});
            return delta;
          },
          [&](const DeleteCandidate& e) {
            live_candidate(e.candidate);
            EditDelta delta;
            remove_candidates({e.candidate}, delta);
            return delta;
          },
          [&](const FixateCandidate& e) {
            const auto& c = live_candidate(e.candidate);
            EditDelta delta;
            if (c.fixed) return delta;
            LabelCandidate n = c;
            n.fixed = true;
            delta.candidates.push_back({c, n});
            delta.fixation_changes.push_back({c.id, false, true});
            return delta;
          },
          [&](const UnfixateCandidate& e) {
            const auto& c = live_candidate(e.candidate);
            EditDelta delta;
            if (!c.fixed) return delta;
            LabelCandidate n = c;
            n.fixed = false;
            delta.candidates.push_back({c, n});
            delta.fixation_changes.push_back({c.id, true, false});
            return delta;
          },
          [&](const SetCandidateWeight& e) {
            check_range(e.weight, 0.0, 1e12, "weight");
            const auto& c = live_candidate(e.candidate);
            EditDelta delta;
            if (c.weight == e.weight) return delta;
            LabelCandidate n = c;
            n.weight = e.weight;
            delta.candidates.push_back({c, n});
            delta.weight_changes.push_back({c.id, c.weight, e.weight});
            return delta;
          },
          [&](const DragCandidate& e) {
            const auto& c = live_candidate(e.candidate);
            const double world = world_size(config_.zoom);
            const Point p = e.top_left;
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 || p.y < 0.0 || p.x > world ||
                p.y > world) {
              throw InvalidInput("drag position outside the world bounds");
            }
            const Rect rect{p.x, p.y, c.rect.w, c.rect.h};
            EditDelta delta;

            // Reuse the feature's free label if it has one.
            const LabelCandidate* target = c.slot == Slot::Free ? &c : nullptr;
            for (CandidateId id : members_[c.feature.value]) {
              if (target) break;
              const auto& m = candidates_[id.value];
              if (m.live() && m.slot == Slot::Free) target = &m;
            }
            if (target) {
              LabelCandidate n = *target;
              n.rect = rect;
              if (config_.keep_fixed) n.fixed = true;
              if (n == *target) return delta;
              delta.candidates.push_back({*target, n});
              if (n.fixed != target->fixed) delta.fixation_changes.push_back({n.id, target->fixed, n.fixed});
              if (!(n.rect == target->rect)) diff_edges({n}, delta);
              return delta;
            }

            LabelCandidate n;
            n.id = CandidateId(static_cast<std::uint32_t>(candidates_.size()));
            n.feature = c.feature;
            n.rect = rect;
            n.slot = Slot::Free;
            n.weight = c.weight;
            n.fixed = config_.keep_fixed;
            n.style = c.style;
            n.box_visible = c.box_visible;
            n.shrunk = c.shrunk;
            delta.candidates.push_back({std::nullopt, n});
            delta.added_vertices.push_back({n.id, vertex_of(n)});
            diff_edges({n}, delta);
            return delta;
          },
      },
      edit);
}

void Instance::commit(const EditDelta& delta) {
  apply_delta(graph_, delta);
  for (const auto& ch : delta.candidates) {
    if (ch.before && ch.after) {
      auto& slot = candidates_[ch.before->id.value];
      if (slot.live()) grid_.erase(slot.id, slot.rect);
      slot = *ch.after;
      if (slot.live()) grid_.insert(slot.id, slot.rect);
    } else if (ch.after) {
      candidates_.push_back(*ch.after);
      members_[ch.after->feature.value].push_back(ch.after->id);
      if (ch.after->live()) grid_.insert(ch.after->id, ch.after->rect);
    } else if (ch.before) {
      const auto& last = candidates_.back();
      if (last.live()) grid_.erase(last.id, last.rect);
      members_[last.feature.value].pop_back();
      candidates_.pop_back();
    }
  }
  for (const auto& fc : delta.features) features_[fc.after.id.value] = fc.after;
}

EditDelta Instance::apply_edit(const Edit& edit) {
  EditDelta delta = preview(edit);
  if (delta.empty()) return delta;
  commit(delta);
  undo_.push_back(delta);
  return delta;
}

EditDelta Instance::undo() {
  if (undo_.empty()) throw NothingToUndo();
  EditDelta inv = invert(undo_.back());
  commit(inv);
  undo_.pop_back();
  return inv;
}

}  // namespace pflp
