#include "pflp/spatial_grid.hpp"

#include <algorithm>
#include <cmath>

#include "pflp/errors.hpp"

namespace pflp {

SpatialGrid::SpatialGrid(double cell_size) : cell_(cell_size) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw InvalidInput("grid cell size must be positive");
  }
}

SpatialGrid::CellRange SpatialGrid::cells_of(const Rect& r) const {
  return {static_cast<std::int64_t>(std::floor(r.x / cell_)),
          static_cast<std::int64_t>(std::floor(r.y / cell_)),
          static_cast<std::int64_t>(std::floor(r.right() / cell_)),
          static_cast<std::int64_t>(std::floor(r.bottom() / cell_))};
}

std::uint64_t SpatialGrid::key(std::int64_t cx, std::int64_t cy) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
         static_cast<std::uint32_t>(cy);
}

void SpatialGrid::insert(CandidateId id, const Rect& r) {
  const CellRange c = cells_of(r);
  for (auto cx = c.x0; cx <= c.x1; ++cx) {
    for (auto cy = c.y0; cy <= c.y1; ++cy) buckets_[key(cx, cy)].push_back(id);
  }
}

void SpatialGrid::erase(CandidateId id, const Rect& r) {
  const CellRange c = cells_of(r);
  for (auto cx = c.x0; cx <= c.x1; ++cx) {
    for (auto cy = c.y0; cy <= c.y1; ++cy) {
      auto it = buckets_.find(key(cx, cy));
      if (it == buckets_.end()) continue;
      auto& bucket = it->second;
      auto pos = std::find(bucket.begin(), bucket.end(), id);
      if (pos != bucket.end()) {
        *pos = bucket.back();
        bucket.pop_back();
      }
      if (bucket.empty()) buckets_.erase(it);
    }
  }
}

std::vector<CandidateId> SpatialGrid::query(const Rect& r) const {
  std::vector<CandidateId> out;
  const CellRange c = cells_of(r);
  for (auto cx = c.x0; cx <= c.x1; ++cx) {
    for (auto cy = c.y0; cy <= c.y1; ++cy) {
      auto it = buckets_.find(key(cx, cy));
      if (it != buckets_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace pflp
