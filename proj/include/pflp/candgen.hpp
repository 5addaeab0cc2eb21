#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pflp/conflict_graph.hpp"
#include "pflp/model.hpp"

namespace pflp {

// Analytic character-count text model. The factors scale the font size into
// an average glyph advance and a line pitch.
struct TextMetricsConfig {
  double char_width_factor = 0.6;
  double line_height_factor = 1.2;
};

struct LabelBox {
  double w = 0.0;
  double h = 0.0;

  friend bool operator==(const LabelBox&, const LabelBox&) = default;
};

struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;
};

inline constexpr double kMaxLatitude = 85.0511;
inline constexpr int kMaxZoom = 22;

// Side length of the Web-Mercator world in pixels (256-pixel tiles).
double world_size(int zoom);

// Web-Mercator world-pixel coordinates, y growing downward.
Point project(double lon, double lat, int zoom);
GeoPoint unproject(Point p, int zoom);

// Splits text into `lines` contiguous parts whose code point counts differ by
// at most one.
std::vector<std::string> split_lines(std::string_view text, int lines);

LabelBox measure_label(std::string_view text, double font_size, double padding, int lines,
                       const TextMetricsConfig& cfg = {});

// Rect of a box placed at `slot` relative to `anchor`. Not defined for Free.
Rect place_box(Point anchor, LabelBox box, Slot slot);

std::span<const Slot> model_slots(PositionModel model);

// Candidates in slot preference order. Ids are left invalid for the caller to
// assign; weights start at the feature's base weight.
std::vector<LabelCandidate> generate_candidates(const FeaturePoint& feature, LabelBox box,
                                                PositionModel model, int zoom,
                                                const LabelStyle& style = {});

// Conflict graph over the live candidates: rectangle conflicts found through a
// uniform grid index, plus every same-feature pair.
ConflictGraph build_conflict_graph(std::span<const LabelCandidate> candidates);

ConflictGraph::Vertex vertex_of(const LabelCandidate& c);

// Median box diagonal of the live candidates; used as the grid cell size.
double median_diagonal(std::span<const LabelCandidate> candidates);

}  // namespace pflp
