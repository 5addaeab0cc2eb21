#pragma once

#include <cmath>

namespace pflp {

// Screen-space pixel point, y grows downward.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Axis-aligned label box; (x, y) is the minimum corner.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double diagonal() const { return std::hypot(w, h); }

  friend bool operator==(const Rect&, const Rect&) = default;
};

// Closed-rectangle intersection: shared edges and corners count as a conflict.
// Two candidates of one point in the 4-position model only share the anchor,
// and they still have to conflict.
inline bool rects_conflict(const Rect& a, const Rect& b) {
  return a.x <= b.right() && b.x <= a.right() && a.y <= b.bottom() && b.y <= a.bottom();
}

}  // namespace pflp
