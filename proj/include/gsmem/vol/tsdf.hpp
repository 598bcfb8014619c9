// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "gsmem/core/geometry.hpp"
#include "gsmem/map/keyframe.hpp"

namespace gsmem {

// Truncated signed distance grid. Values are metric distances clamped to
// [-truncation, truncation] (negative behind surfaces); weight 0 marks
// unobserved voxels. Truncation is 4 voxel sizes.
class TsdfGrid {
 public:
  TsdfGrid(const Vec3& origin, double voxel_size, int nx, int ny, int nz);

  const Vec3& origin() const { return origin_; }
  double voxel_size() const { return voxel_size_; }
  double truncation() const { return 4.0 * voxel_size_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  size_t voxel_count() const { return values_.size(); }

  size_t index(int ix, int iy, int iz) const {
    return ((size_t)iz * ny_ + iy) * nx_ + ix;
  }
  bool in_bounds(int ix, int iy, int iz) const {
    return ix >= 0 && ix < nx_ && iy >= 0 && iy < ny_ && iz >= 0 && iz < nz_;
  }
  Vec3 voxel_center(int ix, int iy, int iz) const {
    return {origin_.x + (ix + 0.5) * voxel_size_, origin_.y + (iy + 0.5) * voxel_size_,
            origin_.z + (iz + 0.5) * voxel_size_};
  }
  // Voxel containing a world point; false when outside the grid.
  bool voxel_of(const Vec3& p, int* ix, int* iy, int* iz) const;

  double value(size_t i) const { return values_[i]; }
  double weight(size_t i) const { return weights_[i]; }
  std::vector<double>& values() { return values_; }
  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }

  // True when the voxel containing p has been observed as inside a surface
  // (weight > 0, value < 0). Points outside the grid are not occupied.
  bool occupied_at(const Vec3& p) const;

  // Projective fusion of one posed depth image: every voxel in view whose
  // signed distance along the camera ray exceeds -truncation folds
  // clamp(depth - voxel_z, +-truncation) into its weighted running average.
  // Pixels with depth 0 (no return) contribute nothing.
  void integrate_depth(const Keyframe& frame);

  // Marches from `from` toward `to` at half-voxel steps. Blocked iff an
  // occupied voxel is crossed strictly before the endpoint, with one voxel of
  // slack at the endpoint so a target on a surface stays visible. Unobserved
  // voxels never block.
  bool ray_visible(const Vec3& from, const Vec3& to) const;

 private:
  Vec3 origin_;
  double voxel_size_;
  int nx_, ny_, nz_;
  std::vector<double> values_;
  std::vector<double> weights_;
};

}  // namespace gsmem
