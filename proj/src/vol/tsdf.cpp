// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/vol/tsdf.hpp"

#include <algorithm>
#include <cmath>

namespace gsmem {

TsdfGrid::TsdfGrid(const Vec3& origin, double voxel_size, int nx, int ny, int nz)
    : origin_(origin),
      voxel_size_(voxel_size),
      nx_(nx),
      ny_(ny),
      nz_(nz),
      values_((size_t)nx * ny * nz, 0.0),
      weights_((size_t)nx * ny * nz, 0.0) {}

bool TsdfGrid::voxel_of(const Vec3& p, int* ix, int* iy, int* iz) const {
  const int x = (int)std::floor((p.x - origin_.x) / voxel_size_);
  const int y = (int)std::floor((p.y - origin_.y) / voxel_size_);
  const int z = (int)std::floor((p.z - origin_.z) / voxel_size_);
  if (!in_bounds(x, y, z)) return false;
  *ix = x;
  *iy = y;
  *iz = z;
  return true;
}

bool TsdfGrid::occupied_at(const Vec3& p) const {
  int ix, iy, iz;
  if (!voxel_of(p, &ix, &iy, &iz)) return false;
  const size_t i = index(ix, iy, iz);
  return weights_[i] > 0.0 && values_[i] < 0.0;
}

void TsdfGrid::integrate_depth(const Keyframe& frame) {
  const Camera& cam = frame.camera;
  const double trunc = truncation();
  const int w = cam.k.width, h = cam.k.height;

  // Restrict the voxel sweep to the axis-aligned cover of the view frustum,
  // cut at the largest observed depth plus the truncation band.
  double max_depth = 0.0;
  for (double d : frame.depth.data) max_depth = std::max(max_depth, d);
  if (max_depth <= 0.0) return;
  const double reach = max_depth + trunc;
  Aabb frustum = Aabb::empty();
  frustum.expand(cam.pose.position());
  for (const double cx : {-0.5, (double)w - 0.5})
    for (const double cy : {-0.5, (double)h - 0.5})
      frustum.expand(cam.pose.position() + cam.ray_world(cx, cy) * reach);
  const int x0 = std::max(0, (int)std::floor((frustum.min.x - origin_.x) / voxel_size_));
  const int y0 = std::max(0, (int)std::floor((frustum.min.y - origin_.y) / voxel_size_));
  const int z0 = std::max(0, (int)std::floor((frustum.min.z - origin_.z) / voxel_size_));
  const int x1 = std::min(nx_ - 1, (int)std::floor((frustum.max.x - origin_.x) / voxel_size_));
  const int y1 = std::min(ny_ - 1, (int)std::floor((frustum.max.y - origin_.y) / voxel_size_));
  const int z1 = std::min(nz_ - 1, (int)std::floor((frustum.max.z - origin_.z) / voxel_size_));

  for (int iz = z0; iz <= z1; ++iz) {
    for (int iy = y0; iy <= y1; ++iy) {
      for (int ix = x0; ix <= x1; ++ix) {
        const Vec3 pc = cam.pose.to_camera(voxel_center(ix, iy, iz));
        if (pc.z <= 1e-9 || pc.z > reach) continue;
        const int px = (int)std::lround(cam.k.fx * pc.x / pc.z + cam.k.cx);
        const int py = (int)std::lround(cam.k.fy * pc.y / pc.z + cam.k.cy);
        if (px < 0 || px >= w || py < 0 || py >= h) continue;
        const double d = frame.depth.at(0, py, px);
        if (d <= 0.0) continue;
        const double sdf = d - pc.z;
        if (sdf <= -trunc) continue;  // far behind the surface: unobserved
        const double v = std::min(sdf, trunc);
        const size_t i = index(ix, iy, iz);
        values_[i] = (values_[i] * weights_[i] + v) / (weights_[i] + 1.0);
        weights_[i] += 1.0;
      }
    }
  }
}

bool TsdfGrid::ray_visible(const Vec3& from, const Vec3& to) const {
  const Vec3 delta = to - from;
  const double len = delta.norm();
  if (len <= voxel_size_) return true;  // endpoint slack swallows the whole ray
  const Vec3 dir = delta * (1.0 / len);
  const double step = 0.5 * voxel_size_;
  for (double t = 0.0; t < len - voxel_size_; t += step) {
    if (occupied_at(from + dir * t)) return false;
  }
  return true;
}

}  // namespace gsmem
