#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pflp/geometry.hpp"
#include "pflp/ids.hpp"

namespace pflp {

// Anchor positions, declared from most to least preferred. The numeric value
// doubles as the slot preference rank used for tie-breaking.
enum class Slot : std::uint8_t {
  AboveRight = 0,
  AboveLeft,
  BelowRight,
  BelowLeft,
  RightCenter,
  LeftCenter,
  AboveCenter,
  BelowCenter,
  Free,  // dragged by the user; not part of the position model
};

inline constexpr int slot_rank(Slot s) { return static_cast<int>(s); }

std::string_view to_string(Slot s);
std::optional<Slot> parse_slot(std::string_view name);

enum class PositionModel : int { Four = 4, Eight = 8 };

std::optional<PositionModel> position_model_from_int(int n);

struct FeaturePoint {
  FeatureId id;
  std::string key;   // external identifier as found in the source file
  std::string name;  // label text
  double lon = 0.0;
  double lat = 0.0;
  double base_weight = 1.0;
  bool deleted = false;

  friend bool operator==(const FeaturePoint&, const FeaturePoint&) = default;
};

struct LabelStyle {
  double font_size = 10.0;
  double padding = 0.0;
  int text_lines = 1;

  friend bool operator==(const LabelStyle&, const LabelStyle&) = default;
};

struct LabelCandidate {
  CandidateId id;
  FeatureId feature;
  Rect rect;
  Slot slot = Slot::AboveRight;
  double weight = 1.0;
  bool fixed = false;
  bool deleted = false;
  LabelStyle style;
  bool box_visible = true;
  // Set once the label was made smaller; enlarge edits are then ignored when
  // the instance runs with shrink precedence.
  bool shrunk = false;

  bool live() const { return !deleted; }

  friend bool operator==(const LabelCandidate&, const LabelCandidate&) = default;
};

// A selection of candidates. `selected` is kept sorted by id.
struct Labeling {
  std::vector<CandidateId> selected;
  double total_weight = 0.0;
  // Only the exact solver sets this, and only when the search completed.
  bool proven_optimal = false;

  std::size_t size() const { return selected.size(); }
  bool contains(CandidateId id) const;
};

struct UpdateParams {
  double epsilon = 1.0;
  // Derive epsilon from the previous solution size so weight strictly
  // dominates stability.
  bool strict_mode = false;
};

}  // namespace pflp
