// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsmem/core/rng.hpp"

namespace gsmem {

namespace {

int grid_cells(double extent, double cell) {
  return std::max(1, (int)std::ceil(extent / cell - 1e-9));
}

// Strict (open-interval) overlap, so geometry that merely touches a cell
// boundary does not claim the cell.
bool overlaps_open(const Aabb& a, const Aabb& b) {
  return a.min.x < b.max.x && b.min.x < a.max.x && a.min.y < b.max.y && b.min.y < a.max.y &&
         a.min.z < b.max.z && b.min.z < a.max.z;
}

double distance2_to_box(const Vec3& p, const Aabb& b) {
  const double dx = std::max({b.min.x - p.x, 0.0, p.x - b.max.x});
  const double dy = std::max({b.min.y - p.y, 0.0, p.y - b.max.y});
  const double dz = std::max({b.min.z - p.z, 0.0, p.z - b.max.z});
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace

SimWorld::SimWorld(SceneSpec scene, WorldConfig cfg, uint64_t seed)
    : scene_(std::move(scene)), cfg_(cfg), seed_(seed) {
  xy_ = scene_.agent_start;
  yaw_ = scene_.agent_yaw;

  const Vec3 size = scene_.bounds.size();
  const int w = grid_cells(size.x, cfg_.occ_cell);
  const int h = grid_cells(size.y, cfg_.occ_cell);
  gt_occ_ = OccupancyGrid({scene_.bounds.min.x, scene_.bounds.min.y}, cfg_.occ_cell, w, h);
  for (int iy = 0; iy < h; ++iy) {
    for (int ix = 0; ix < w; ++ix) {
      const Vec2 c0 = {scene_.bounds.min.x + ix * cfg_.occ_cell,
                       scene_.bounds.min.y + iy * cfg_.occ_cell};
      const Aabb column = {{c0.x, c0.y, cfg_.occ_z_lo},
                           {c0.x + cfg_.occ_cell, c0.y + cfg_.occ_cell, cfg_.occ_z_hi}};
      bool occupied = false;
      for (const Aabb& wall : scene_.walls)
        if (overlaps_open(wall, column)) {
          occupied = true;
          break;
        }
      if (!occupied) {
        for (const SceneObject& obj : scene_.objects) {
          const bool hit = obj.shape == SceneObject::Shape::sphere
                               ? distance2_to_box(obj.center, column) <
                                     obj.radius * obj.radius
                               : overlaps_open(obj.bounds(), column);
          if (hit) {
            occupied = true;
            break;
          }
        }
      }
      gt_occ_.at(ix, iy) = occupied ? CellState::occupied : CellState::free;
    }
  }
  gt_free_ = gt_occ_.count(CellState::free);
}

TsdfGrid SimWorld::make_tsdf() const {
  const Vec3 size = scene_.bounds.size();
  return TsdfGrid(scene_.bounds.min, cfg_.tsdf_voxel, grid_cells(size.x, cfg_.tsdf_voxel),
                  grid_cells(size.y, cfg_.tsdf_voxel), grid_cells(size.z, cfg_.tsdf_voxel));
}

Camera SimWorld::camera_at(const Vec2& xy, double yaw) const {
  Camera cam;
  cam.k = Intrinsics::from_fov(cfg_.view_width, cfg_.view_height,
                               cfg_.fov_deg * std::numbers::pi / 180.0);
  const Vec3 eye{xy.x, xy.y, scene_.agent_height};
  const Vec3 target = eye + Vec3{std::cos(yaw), std::sin(yaw), 0.0};
  cam.pose = Pose::look_at(eye, target);
  return cam;
}

Camera SimWorld::agent_camera(double yaw_offset) const {
  return camera_at(xy_, yaw_ + yaw_offset);
}

Keyframe SimWorld::observe(double yaw_offset) const {
  return render_ground_truth(scene_, agent_camera(yaw_offset));
}

std::vector<Detection> SimWorld::detect_at(const Camera& cam) {
  return detect(scene_, cam, mix_seed(seed_, detect_calls_++), cfg_.detector);
}

void SimWorld::set_agent(const Vec2& xy, double yaw) {
  xy_ = xy;
  yaw_ = yaw;
}

std::array<int, 2> SimWorld::agent_cell() const {
  int ix = 0, iy = 0;
  if (!gt_occ_.cell_of(xy_, &ix, &iy)) return {-1, -1};
  return {ix, iy};
}

bool SimWorld::step_to(const std::array<int, 2>& cell) {
  const std::array<int, 2> cur = agent_cell();
  if (cur[0] < 0) return false;
  if (!gt_occ_.in_bounds(cell[0], cell[1])) return false;
  if (gt_occ_.at(cell[0], cell[1]) != CellState::free) return false;
  const int dx = cell[0] - cur[0], dy = cell[1] - cur[1];
  if (std::max(std::abs(dx), std::abs(dy)) > 1) return false;
  if (dx == 0 && dy == 0) return true;
  const Vec2 to = gt_occ_.cell_center(cell[0], cell[1]);
  trajectory_ += (to - xy_).norm();
  yaw_ = std::atan2(to.y - xy_.y, to.x - xy_.x);
  xy_ = to;
  return true;
}

double SimWorld::coverage(const OccupancyGrid& agent) const {
  if (gt_free_ == 0) return 0.0;
  size_t covered = 0;
  for (int iy = 0; iy < gt_occ_.height; ++iy) {
    for (int ix = 0; ix < gt_occ_.width; ++ix) {
      if (gt_occ_.at(ix, iy) != CellState::free) continue;
      int ax = 0, ay = 0;
      if (!agent.cell_of(gt_occ_.cell_center(ix, iy), &ax, &ay)) continue;
      if (agent.at(ax, ay) == CellState::free) ++covered;
    }
  }
  return (double)covered / (double)gt_free_;
}

}  // namespace gsmem
