// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsmem/sim/scene.hpp"

namespace gsmem {

// Multi-room layout generator: a rooms_x by rooms_y grid of rectangular
// rooms, every adjacent pair connected by a door, objects scattered inside
// with clearance margins. Deterministic per seed; the generator retries
// layouts until every free cell is reachable from the agent start.
struct SceneGenConfig {
  int rooms_x = 3;
  int rooms_y = 1;
  double room_w = 3.6;          // interior x extent, meters
  double room_d = 3.0;          // interior y extent, meters
  double wall_thickness = 0.1;
  double wall_height = 2.0;
  double ceiling = 2.5;         // scene bounds z extent
  double door_width = 0.9;
  int objects_per_room = 3;
  double agent_height = 1.2;
  // Labels guaranteed to appear, assigned to rooms round-robin and excluded
  // from the random fill so each appears exactly once.
  std::vector<std::string> planted_labels;
};

SceneSpec generate_scene(uint64_t seed, const SceneGenConfig& cfg = {});

}  // namespace gsmem
