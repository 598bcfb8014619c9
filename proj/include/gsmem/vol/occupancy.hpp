// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "gsmem/core/math.hpp"
#include "gsmem/vol/tsdf.hpp"

namespace gsmem {

enum class CellState : uint8_t { unknown = 0, free = 1, occupied = 2 };

// 2D tri-state grid derived from a height slice of the TSDF. Cell (0, 0)
// covers the square with corner `origin`.
struct OccupancyGrid {
  Vec2 origin{0.0, 0.0};
  double cell_size = 0.1;
  int width = 0;
  int height = 0;
  std::vector<CellState> cells;

  OccupancyGrid() = default;
  OccupancyGrid(Vec2 org, double cell, int w, int h)
      : origin(org), cell_size(cell), width(w), height(h),
        cells((size_t)w * h, CellState::unknown) {}

  bool in_bounds(int ix, int iy) const {
    return ix >= 0 && ix < width && iy >= 0 && iy < height;
  }
  CellState at(int ix, int iy) const { return cells[(size_t)iy * width + ix]; }
  CellState& at(int ix, int iy) { return cells[(size_t)iy * width + ix]; }
  Vec2 cell_center(int ix, int iy) const {
    return {origin.x + (ix + 0.5) * cell_size, origin.y + (iy + 0.5) * cell_size};
  }
  bool cell_of(const Vec2& p, int* ix, int* iy) const {
    const int x = (int)std::floor((p.x - origin.x) / cell_size);
    const int y = (int)std::floor((p.y - origin.y) / cell_size);
    if (!in_bounds(x, y)) return false;
    *ix = x;
    *iy = y;
    return true;
  }

  size_t count(CellState s) const {
    size_t n = 0;
    for (CellState c : cells) n += c == s;
    return n;
  }
};

// Collapses the TSDF over a height slice: a column cell is occupied if any
// observed voxel in the slice is negative, free if it is observed and all
// nonnegative, and unknown when nothing in the slice was ever observed.
OccupancyGrid occupancy_from_tsdf(const TsdfGrid& tsdf, double cell_size = 0.1,
                                  double z_lo = 0.1, double z_hi = 1.5);

// One frontier cluster: free cells bordering unknown space. The normal is
// the mean direction from the member cells toward their unknown neighbors.
struct FrontierCluster {
  std::vector<std::array<int, 2>> cells;  // (ix, iy), discovery order
  Vec2 centroid{0.0, 0.0};                // world coordinates
  Vec2 normal{1.0, 0.0};
};

// Frontier cells are free cells 4-adjacent to at least one unknown cell
// (neighbors outside the grid do not count). Clusters are 8-connected
// components; those smaller than min_cluster_size are dropped.
std::vector<FrontierCluster> extract_frontiers(const OccupancyGrid& occ,
                                               int min_cluster_size = 5);

// Shortest 8-connected path through free cells, unknown and occupied both
// blocking. Move costs are 1 and sqrt(2), compared exactly; among equal-cost
// paths the lexicographically smallest sequence of row-major cell indices
// wins. Returns the cell sequence including both endpoints, or nullopt when
// unreachable (or either endpoint is not a free in-bounds cell).
std::optional<std::vector<std::array<int, 2>>> plan_path(const OccupancyGrid& occ,
                                                         std::array<int, 2> from,
                                                         std::array<int, 2> to);

}  // namespace gsmem
