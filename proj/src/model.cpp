#include "pflp/model.hpp"

#include <algorithm>

namespace pflp {
namespace {

constexpr std::array<std::string_view, 9> kSlotNames = {
    "above-right", "above-left",   "below-right",  "below-left", "right-center",
    "left-center", "above-center", "below-center", "free",
};

}  // namespace

std::string_view to_string(Slot s) { return kSlotNames[static_cast<std::size_t>(s)]; }

std::optional<Slot> parse_slot(std::string_view name) {
  for (std::size_t i = 0; i < kSlotNames.size(); ++i) {
    if (kSlotNames[i] == name) return static_cast<Slot>(i);
  }
  return std::nullopt;
}

std::optional<PositionModel> position_model_from_int(int n) {
  if (n == 4) return PositionModel::Four;
  if (n == 8) return PositionModel::Eight;
  return std::nullopt;
}

bool Labeling::contains(CandidateId id) const {
  return std::binary_search(selected.begin(), selected.end(), id);
}

}  // namespace pflp
