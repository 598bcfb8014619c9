// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

#include "gsmem/sim/scene.hpp"
#include "gsmem/sim/sensors.hpp"
#include "gsmem/vol/occupancy.hpp"
#include "gsmem/vol/tsdf.hpp"

namespace gsmem {

struct WorldConfig {
  int view_width = 128;     // agent camera resolution
  int view_height = 128;
  double fov_deg = 90.0;    // horizontal field of view
  double tsdf_voxel = 0.05;
  double occ_cell = 0.1;
  double occ_z_lo = 0.1;    // height slice shared with the mapping pipeline
  double occ_z_hi = 1.5;
  DetectorConfig detector;
};

// Mutable episode state around an immutable scene: the agent's pose, its
// accumulated trajectory, the deterministic detection stream, and the
// ground-truth occupancy grid used for collision checks and coverage.
class SimWorld {
 public:
  explicit SimWorld(SceneSpec scene, WorldConfig cfg = {}, uint64_t seed = 0);

  const SceneSpec& scene() const { return scene_; }
  const WorldConfig& config() const { return cfg_; }
  uint64_t seed() const { return seed_; }
  const OccupancyGrid& gt_occupancy() const { return gt_occ_; }

  // A TSDF grid spanning the scene bounds at the configured voxel size, so
  // occupancy grids derived from it align with the ground-truth grid.
  TsdfGrid make_tsdf() const;

  Camera camera_at(const Vec2& xy, double yaw) const;
  Camera agent_camera(double yaw_offset = 0.0) const;
  Keyframe observe(double yaw_offset = 0.0) const;

  // Detections at a pose; consumes one slot of the world's seed stream, so
  // identical call sequences yield identical noise.
  std::vector<Detection> detect_at(const Camera& cam);

  Vec2 agent_xy() const { return xy_; }
  double agent_yaw() const { return yaw_; }
  void set_agent(const Vec2& xy, double yaw);  // teleport, no trajectory cost
  std::array<int, 2> agent_cell() const;

  // Moves to an adjacent (8-connected) ground-truth-free cell; returns false
  // and stays put when the target is out of range, out of bounds, or
  // occupied. Successful moves add the metric displacement to the trajectory
  // and face the agent along the move.
  bool step_to(const std::array<int, 2>& cell);

  double trajectory_length() const { return trajectory_; }

  // Fraction of ground-truth free cells the agent's grid also marks free
  // (matched by world position, so differing grid dims are fine).
  double coverage(const OccupancyGrid& agent) const;
  size_t gt_free_cells() const { return gt_free_; }

 private:
  SceneSpec scene_;
  WorldConfig cfg_;
  uint64_t seed_ = 0;
  Vec2 xy_{0, 0};
  double yaw_ = 0.0;
  double trajectory_ = 0.0;
  OccupancyGrid gt_occ_;
  size_t gt_free_ = 0;
  uint64_t detect_calls_ = 0;
};

}  // namespace gsmem
