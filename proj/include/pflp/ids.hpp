#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>

namespace pflp {

// Typed handle so feature and candidate indices cannot be mixed up.
template <class Tag>
struct StrongId {
  static constexpr std::uint32_t kInvalid = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t value = kInvalid;

  constexpr StrongId() = default;
  constexpr explicit StrongId(std::uint32_t v) : value(v) {}

  constexpr bool valid() const { return value != kInvalid; }

  friend constexpr auto operator<=>(StrongId, StrongId) = default;
};

struct FeatureTag {};
struct CandidateTag {};

using FeatureId = StrongId<FeatureTag>;
using CandidateId = StrongId<CandidateTag>;

}  // namespace pflp

template <class Tag>
struct std::hash<pflp::StrongId<Tag>> {
  std::size_t operator()(pflp::StrongId<Tag> id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
