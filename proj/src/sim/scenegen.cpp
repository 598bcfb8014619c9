// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/sim/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "gsmem/core/rng.hpp"
#include "gsmem/sim/vocab.hpp"
#include "gsmem/sim/world.hpp"

namespace gsmem {

namespace {

const std::vector<Vec3>& palette() {
  static const std::vector<Vec3> colors = {
      {0.85, 0.20, 0.20}, {0.20, 0.70, 0.25}, {0.20, 0.35, 0.85}, {0.90, 0.80, 0.15},
      {0.60, 0.25, 0.70}, {0.15, 0.70, 0.75}, {0.90, 0.50, 0.12}, {0.90, 0.45, 0.60},
      {0.50, 0.33, 0.18}, {0.10, 0.50, 0.50}, {0.50, 0.55, 0.15}, {0.15, 0.20, 0.50},
  };
  return colors;
}

// Two wall segments spanning `lo..hi` along the door axis with a jittered
// gap of `door` somewhere comfortably inside.
void add_wall_with_door(std::vector<Aabb>& walls, bool vertical, double fixed_lo,
                        double fixed_hi, double lo, double hi, double door, double z_hi,
                        Rng& rng) {
  const double slack = (hi - lo) - door - 0.4;
  const double gap_lo = lo + 0.2 + uniform(rng, 0.0, std::max(0.0, slack));
  const double gap_hi = gap_lo + door;
  const auto push = [&](double a, double b) {
    if (b - a < 1e-9) return;
    if (vertical)
      walls.push_back({{fixed_lo, a, 0.0}, {fixed_hi, b, z_hi}});
    else
      walls.push_back({{a, fixed_lo, 0.0}, {b, fixed_hi, z_hi}});
  };
  push(lo, gap_lo);
  push(gap_hi, hi);
}

bool xy_overlaps_with_gap(const Aabb& a, const Aabb& b, double gap) {
  return a.min.x - gap < b.max.x && b.min.x - gap < a.max.x && a.min.y - gap < b.max.y &&
         b.min.y - gap < a.max.y;
}

// Every free cell reachable from the agent start (8-connected)?
bool fully_connected(const SceneSpec& scene) {
  SimWorld world(scene);
  const OccupancyGrid& occ = world.gt_occupancy();
  const std::array<int, 2> start = world.agent_cell();
  if (start[0] < 0 || occ.at(start[0], start[1]) != CellState::free) return false;
  std::vector<char> seen((size_t)occ.width * occ.height, 0);
  std::deque<std::array<int, 2>> queue = {start};
  seen[(size_t)start[1] * occ.width + start[0]] = 1;
  size_t reached = 0;
  while (!queue.empty()) {
    const auto [cx, cy] = queue.front();
    queue.pop_front();
    ++reached;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int nx = cx + dx, ny = cy + dy;
        if (!occ.in_bounds(nx, ny)) continue;
        char& mark = seen[(size_t)ny * occ.width + nx];
        if (mark || occ.at(nx, ny) != CellState::free) continue;
        mark = 1;
        queue.push_back({nx, ny});
      }
    }
  }
  return reached == world.gt_free_cells();
}

SceneSpec generate_attempt(uint64_t seed, const SceneGenConfig& cfg, Rng& rng) {
  const double wt = cfg.wall_thickness;
  const double width = cfg.rooms_x * cfg.room_w + (cfg.rooms_x + 1) * wt;
  const double depth = cfg.rooms_y * cfg.room_d + (cfg.rooms_y + 1) * wt;

  SceneSpec scene;
  scene.name = "gen-" + std::to_string(seed);
  scene.seed = seed;
  scene.bounds = {{0.0, 0.0, 0.0}, {width, depth, cfg.ceiling}};
  scene.agent_height = cfg.agent_height;

  const auto room_interior = [&](int i, int j) -> Aabb {
    const double x0 = wt + i * (cfg.room_w + wt);
    const double y0 = wt + j * (cfg.room_d + wt);
    return {{x0, y0, 0.0}, {x0 + cfg.room_w, y0 + cfg.room_d, cfg.wall_height}};
  };
  for (int j = 0; j < cfg.rooms_y; ++j)
    for (int i = 0; i < cfg.rooms_x; ++i)
      scene.rooms.push_back(
          {"room_" + std::to_string(i) + "_" + std::to_string(j), room_interior(i, j)});

  // Outer shell.
  scene.walls.push_back({{0.0, 0.0, 0.0}, {width, wt, cfg.wall_height}});
  scene.walls.push_back({{0.0, depth - wt, 0.0}, {width, depth, cfg.wall_height}});
  scene.walls.push_back({{0.0, 0.0, 0.0}, {wt, depth, cfg.wall_height}});
  scene.walls.push_back({{width - wt, 0.0, 0.0}, {width, depth, cfg.wall_height}});

  // Internal walls with doors; segments extend past the interior span so
  // junction corners stay sealed.
  for (int j = 0; j < cfg.rooms_y; ++j) {
    for (int i = 0; i + 1 < cfg.rooms_x; ++i) {
      const Aabb room = room_interior(i, j);
      add_wall_with_door(scene.walls, true, room.max.x, room.max.x + wt,
                         std::max(0.0, room.min.y - wt), std::min(depth, room.max.y + wt),
                         cfg.door_width, cfg.wall_height, rng);
    }
  }
  for (int j = 0; j + 1 < cfg.rooms_y; ++j) {
    for (int i = 0; i < cfg.rooms_x; ++i) {
      const Aabb room = room_interior(i, j);
      add_wall_with_door(scene.walls, false, room.max.y, room.max.y + wt,
                         std::max(0.0, room.min.x - wt), std::min(width, room.max.x + wt),
                         cfg.door_width, cfg.wall_height, rng);
    }
  }

  // Agent starts near the first room's corner, facing its center.
  const Aabb first = room_interior(0, 0);
  scene.agent_start = {first.min.x + 0.8, first.min.y + 0.8};
  const Vec3 room_center = first.centroid();
  scene.agent_yaw =
      std::atan2(room_center.y - scene.agent_start.y, room_center.x - scene.agent_start.x);

  // One label per object, sampled without replacement; planted labels first,
  // assigned to rooms round-robin.
  const int n_rooms = cfg.rooms_x * cfg.rooms_y;
  std::set<std::string> used;
  for (const std::string& label : cfg.planted_labels) used.insert(canonical_label(label));
  std::vector<std::vector<std::string>> room_labels(n_rooms);
  for (size_t k = 0; k < cfg.planted_labels.size(); ++k)
    room_labels[k % n_rooms].push_back(canonical_label(cfg.planted_labels[k]));
  for (int r = 0; r < n_rooms; ++r) {
    while ((int)room_labels[r].size() < cfg.objects_per_room) {
      const std::string& pick = vocab_labels()[rng() % vocab_labels().size()];
      if (used.count(pick)) continue;  // vocabulary has 64 labels, plenty free
      used.insert(pick);
      room_labels[r].push_back(pick);
    }
  }

  for (int r = 0; r < n_rooms; ++r) {
    const Aabb room = scene.rooms[r].interior;
    for (const std::string& label : room_labels[r]) {
      SceneObject obj;
      obj.label = label;
      obj.tags = vocab_tags(label);
      obj.color = palette()[rng() % palette().size()];
      obj.shape = uniform(rng, 0.0, 1.0) < 0.3 ? SceneObject::Shape::sphere
                                               : SceneObject::Shape::box;
      if (obj.shape == SceneObject::Shape::sphere) {
        obj.radius = uniform(rng, 0.15, 0.3);
      } else {
        obj.size = {uniform(rng, 0.35, 0.7), uniform(rng, 0.35, 0.7),
                    uniform(rng, 0.4, 1.0)};
      }
      const double half_x =
          obj.shape == SceneObject::Shape::sphere ? obj.radius : obj.size.x * 0.5;
      const double half_y =
          obj.shape == SceneObject::Shape::sphere ? obj.radius : obj.size.y * 0.5;
      const double half_z =
          obj.shape == SceneObject::Shape::sphere ? obj.radius : obj.size.z * 0.5;

      bool placed = false;
      for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
        const double margin = 0.35;
        const double x = uniform(rng, room.min.x + half_x + margin,
                                 room.max.x - half_x - margin);
        const double y = uniform(rng, room.min.y + half_y + margin,
                                 room.max.y - half_y - margin);
        obj.center = {x, y, half_z};
        const Aabb box = obj.bounds();
        bool ok = true;
        for (const SceneObject& other : scene.objects)
          if (xy_overlaps_with_gap(box, other.bounds(), 0.25)) {
            ok = false;
            break;
          }
        if (ok && r == 0) {
          const double dx = x - scene.agent_start.x, dy = y - scene.agent_start.y;
          if (dx * dx + dy * dy < 1.0 * 1.0) ok = false;
        }
        placed = ok;
      }
      if (placed) scene.objects.push_back(obj);
    }
  }
  return scene;
}

}  // namespace

SceneSpec generate_scene(uint64_t seed, const SceneGenConfig& cfg) {
  Rng rng(mix_seed(seed, fnv1a("scene-generator")));
  SceneSpec best;
  for (int attempt = 0; attempt < 30; ++attempt) {
    SceneSpec scene = generate_attempt(seed, cfg, rng);
    if (attempt == 0) best = scene;
    if (fully_connected(scene)) return scene;
  }
  return best;  // extremely unlikely; callers get a valid if imperfect layout
}

}  // namespace gsmem
