#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "pflp/geometry.hpp"
#include "pflp/ids.hpp"

namespace pflp {

// Uniform bucket grid over candidate rectangles. A rect is registered in every
// cell its closed extent touches, so touching rectangles always share a cell.
class SpatialGrid {
 public:
  explicit SpatialGrid(double cell_size = 32.0);

  double cell_size() const { return cell_; }

  void insert(CandidateId id, const Rect& r);
  void erase(CandidateId id, const Rect& r);

  // Ids registered in any cell touched by r; sorted, without duplicates.
  std::vector<CandidateId> query(const Rect& r) const;

 private:
  struct CellRange {
    std::int64_t x0, y0, x1, y1;
  };

  CellRange cells_of(const Rect& r) const;
  static std::uint64_t key(std::int64_t cx, std::int64_t cy);

  double cell_;
  std::unordered_map<std::uint64_t, std::vector<CandidateId>> buckets_;
};

}  // namespace pflp
