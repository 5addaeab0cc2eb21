#include "pflp/candgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "pflp/errors.hpp"
#include "pflp/spatial_grid.hpp"

namespace pflp {
namespace {

constexpr std::array<Slot, 8> kSlotOrder = {
    Slot::AboveRight,  Slot::AboveLeft,  Slot::BelowRight,  Slot::BelowLeft,
    Slot::RightCenter, Slot::LeftCenter, Slot::AboveCenter, Slot::BelowCenter,
};

// Byte offsets of every UTF-8 code point start, plus the end offset.
std::vector<std::size_t> code_point_offsets(std::string_view text) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) out.push_back(i);
  }
  out.push_back(text.size());
  return out;
}

bool all_whitespace(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  });
}

// Pixel extents are rounded up; the slack absorbs products such as
// 4 * 0.6 * 10 that land a few ulps above an integer.
double ceil_px(double v) { return std::ceil(v - 1e-9); }

void check_zoom(int zoom) {
  if (zoom < 0 || zoom > kMaxZoom) throw InvalidInput("zoom must be within [0, 22]");
}

}  // namespace

double world_size(int zoom) {
  check_zoom(zoom);
  return 256.0 * std::ldexp(1.0, zoom);
}

Point project(double lon, double lat, int zoom) {
  if (!(lat >= -kMaxLatitude && lat <= kMaxLatitude)) {
    throw InvalidInput("latitude " + std::to_string(lat) + " outside Web-Mercator bounds");
  }
  if (!(lon >= -180.0 && lon <= 180.0)) {
    throw InvalidInput("longitude " + std::to_string(lon) + " outside [-180, 180]");
  }
  const double size = world_size(zoom);
  const double phi = lat * std::numbers::pi / 180.0;
  const double x = (lon + 180.0) / 360.0 * size;
  const double y = (1.0 - std::log(std::tan(phi) + 1.0 / std::cos(phi)) / std::numbers::pi) / 2.0 * size;
  return {x, y};
}

GeoPoint unproject(Point p, int zoom) {
  const double size = world_size(zoom);
  const double lon = p.x / size * 360.0 - 180.0;
  const double n = std::numbers::pi * (1.0 - 2.0 * p.y / size);
  const double lat = std::atan(std::sinh(n)) * 180.0 / std::numbers::pi;
  return {lon, lat};
}

std::vector<std::string> split_lines(std::string_view text, int lines) {
  if (lines < 1) throw InvalidInput("line count must be at least 1");
  const auto offsets = code_point_offsets(text);
  const std::size_t n = offsets.size() - 1;
  const std::size_t parts = static_cast<std::size_t>(lines);
  std::vector<std::string> out;
  out.reserve(parts);
  std::size_t begin = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    // The first n % parts lines take one extra code point.
    const std::size_t len = n / parts + (i < n % parts ? 1 : 0);
    const std::size_t end = begin + len;
    out.emplace_back(text.substr(offsets[begin], offsets[end] - offsets[begin]));
    begin = end;
  }
  return out;
}

LabelBox measure_label(std::string_view text, double font_size, double padding, int lines,
                       const TextMetricsConfig& cfg) {
  if (!(font_size > 0.0)) throw InvalidInput("font size must be positive");
  if (!(padding >= 0.0)) throw InvalidInput("padding must be non-negative");
  if (lines < 1) throw InvalidInput("line count must be at least 1");
  if (!(cfg.char_width_factor > 0.0) || !(cfg.line_height_factor > 0.0)) {
    throw InvalidInput("text metric factors must be positive");
  }

  std::size_t longest = 1;
  if (!text.empty() && !all_whitespace(text)) {
    longest = 0;
    for (const auto& line : split_lines(text, lines)) {
      longest = std::max(longest, code_point_offsets(line).size() - 1);
    }
    longest = std::max<std::size_t>(longest, 1);
  }
  const double w = ceil_px(static_cast<double>(longest) * cfg.char_width_factor * font_size);
  const double h = ceil_px(static_cast<double>(lines) * cfg.line_height_factor * font_size);
  return {w + 2.0 * padding, h + 2.0 * padding};
}

Rect place_box(Point anchor, LabelBox box, Slot slot) {
  const double left = anchor.x - box.w;
  const double up = anchor.y - box.h;
  const double mid_x = anchor.x - box.w / 2.0;
  const double mid_y = anchor.y - box.h / 2.0;
  switch (slot) {
    case Slot::AboveRight: return {anchor.x, up, box.w, box.h};
    case Slot::AboveLeft: return {left, up, box.w, box.h};
    case Slot::BelowRight: return {anchor.x, anchor.y, box.w, box.h};
    case Slot::BelowLeft: return {left, anchor.y, box.w, box.h};
    case Slot::RightCenter: return {anchor.x, mid_y, box.w, box.h};
    case Slot::LeftCenter: return {left, mid_y, box.w, box.h};
    case Slot::AboveCenter: return {mid_x, up, box.w, box.h};
    case Slot::BelowCenter: return {mid_x, anchor.y, box.w, box.h};
    case Slot::Free: break;
  }
  throw InvalidInput("free slot has no anchor rule");
}

std::span<const Slot> model_slots(PositionModel model) {
  return std::span<const Slot>(kSlotOrder).first(static_cast<std::size_t>(model));
}

std::vector<LabelCandidate> generate_candidates(const FeaturePoint& feature, LabelBox box,
                                                PositionModel model, int zoom,
                                                const LabelStyle& style) {
  if (!(box.w > 0.0) || !(box.h > 0.0)) throw InvalidInput("label box must be positive");
  const Point anchor = project(feature.lon, feature.lat, zoom);
  std::vector<LabelCandidate> out;
  for (Slot slot : model_slots(model)) {
    LabelCandidate c;
    c.feature = feature.id;
    c.rect = place_box(anchor, box, slot);
    c.slot = slot;
    c.weight = feature.base_weight;
    c.style = style;
    out.push_back(c);
  }
  return out;
}

ConflictGraph::Vertex vertex_of(const LabelCandidate& c) {
  return {c.feature, c.slot, c.weight, c.fixed};
}

double median_diagonal(std::span<const LabelCandidate> candidates) {
  std::vector<double> diag;
  diag.reserve(candidates.size());
  for (const auto& c : candidates) {
    if (c.live()) diag.push_back(c.rect.diagonal());
  }
  if (diag.empty()) return 1.0;
  auto mid = diag.begin() + static_cast<std::ptrdiff_t>(diag.size() / 2);
  std::nth_element(diag.begin(), mid, diag.end());
  return std::max(*mid, 1e-6);
}

ConflictGraph build_conflict_graph(std::span<const LabelCandidate> candidates) {
  ConflictGraph graph;
  SpatialGrid grid(median_diagonal(candidates));
  std::unordered_map<FeatureId, std::vector<CandidateId>> by_feature;
  std::vector<const LabelCandidate*> by_id;

  for (const auto& c : candidates) {
    if (!c.live()) continue;
    graph.add_vertex(c.id, vertex_of(c));
    grid.insert(c.id, c.rect);
    by_feature[c.feature].push_back(c.id);
    if (c.id.value >= by_id.size()) by_id.resize(c.id.value + 1, nullptr);
    by_id[c.id.value] = &c;
  }
  for (const auto& c : candidates) {
    if (!c.live()) continue;
    for (CandidateId other : grid.query(c.rect)) {
      if (other <= c.id) continue;
      if (rects_conflict(c.rect, by_id[other.value]->rect)) graph.add_edge(c.id, other);
    }
  }
  for (const auto& [feature, ids] : by_feature) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) graph.add_edge(ids[i], ids[j]);
    }
  }
  return graph;
}

}  // namespace pflp
