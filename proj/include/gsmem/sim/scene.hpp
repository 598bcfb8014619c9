// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsmem/core/camera.hpp"
#include "gsmem/core/geometry.hpp"
#include "gsmem/map/keyframe.hpp"

namespace gsmem {

// Synthetic world definition. Coordinates are meters, z up, floor at z = 0.
// Walls are axis-aligned boxes; objects are axis-aligned boxes or spheres
// with a flat color, a label, and coarse semantic tags.

struct SceneObject {
  enum class Shape { box, sphere };
  Shape shape = Shape::box;
  std::string label;
  std::vector<std::string> tags;
  Vec3 center{0, 0, 0};
  Vec3 size{0, 0, 0};   // box: full extents; ignored for spheres
  double radius = 0.0;  // sphere only
  Vec3 color{0.5, 0.5, 0.5};

  Aabb bounds() const {
    if (shape == Shape::sphere)
      return {center - Vec3{radius, radius, radius}, center + Vec3{radius, radius, radius}};
    return {center - size * 0.5, center + size * 0.5};
  }
};

struct Room {
  std::string name;
  Aabb interior;
};

struct SceneSpec {
  std::string name = "scene";
  uint64_t seed = 0;
  Aabb bounds;            // world extents including walls
  Vec2 agent_start{0, 0};
  double agent_yaw = 0.0;     // radians, 0 faces +x, counter-clockwise
  double agent_height = 1.2;  // camera height above the floor, meters
  std::vector<Room> rooms;
  std::vector<Aabb> walls;
  std::vector<SceneObject> objects;
};

// Version tag of the scene file format.
inline constexpr const char* kSceneFormat = "gsmem-scene/1";

// Depth sensor range; hits farther than this report no depth return.
inline constexpr double kMaxSensorDepth = 10.0;

inline const Vec3 kWallColor{0.62, 0.60, 0.58};
inline const Vec3 kFloorColor{0.80, 0.77, 0.72};

// Throws std::runtime_error on structural problems: wrong format version,
// empty labels, non-positive sizes, or an object whose center lies in no
// room.
void validate_scene(const SceneSpec& scene);

SceneSpec parse_scene(const std::string& json_text);  // validates
std::string scene_to_json(const SceneSpec& scene);
SceneSpec load_scene(const std::string& path);
void save_scene(const SceneSpec& scene, const std::string& path);

// Nearest intersection along origin + t * dir for t in (0, t_max]. The `t`
// returned is in units of |dir|; passing a camera ray whose camera-space z
// component is 1 makes it the metric z-depth directly. `object` is the index
// into scene.objects, or -1 for walls and the floor.
struct SceneHit {
  double t = 0.0;
  int object = -1;
  Vec3 color{0, 0, 0};
};
std::optional<SceneHit> raycast_scene(const SceneSpec& scene, const Vec3& origin,
                                      const Vec3& dir, double t_max = 1e30);

// Per-pixel ray-cast ground truth: flat-shaded color, metric z-depth (0 for
// no hit or hits beyond the sensor range), and the object index under each
// pixel (-1 for background, walls, and floor).
struct GroundTruthRender {
  ImageF color;  // 3 planes
  ImageF depth;  // 1 plane
  std::vector<int> instances;  // row-major, width * height
};
GroundTruthRender render_scene(const SceneSpec& scene, const Camera& cam);

// The color+depth part of render_scene as a mapper-ready keyframe.
Keyframe render_ground_truth(const SceneSpec& scene, const Camera& cam);

// Just the instance map (same convention as GroundTruthRender::instances).
std::vector<int> render_instances(const SceneSpec& scene, const Camera& cam);

}  // namespace gsmem
