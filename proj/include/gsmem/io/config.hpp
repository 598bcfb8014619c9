// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "gsmem/explore/explorer.hpp"
#include "gsmem/sim/world.hpp"

namespace gsmem {

// Everything tunable from a config file or the command line: the engine
// parameter bundle, the simulated sensor rig, and the run seed.
struct HarnessConfig {
  EngineParams params;
  WorldConfig world;
  int window_size = 10;
  uint64_t seed = 1;
};

// Applies a JSON object of flat, documented keys (tau_s, k_obj, tau_clip,
// tau_d, k_cluster, flow_threshold, window_size, azimuth_step, elevations,
// ...) on top of `cfg`. Unknown keys and malformed values throw
// std::runtime_error naming the key.
void apply_config_json(HarnessConfig& cfg, const std::string& json_text);

// Reads the file and applies it. Throws std::runtime_error when the file is
// missing or does not parse.
void apply_config_file(HarnessConfig& cfg, const std::string& path);

// The full configuration as a JSON document (every documented key, current
// values); inverse of apply_config_json for supported keys.
std::string config_to_json(const HarnessConfig& cfg);

}  // namespace gsmem
