// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

#include "gsmem/explore/explorer.hpp"
#include "gsmem/io/config.hpp"

namespace gsmem {

// Loading failures carry a kind so callers can map them to distinct exit
// codes: the file is absent, the content is damaged, or the content is a
// newer format than this build understands.
struct SnapshotError : std::runtime_error {
  enum class Kind { missing, corrupt, version };
  SnapshotError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  Kind kind;
};

// On-disk memory snapshot: an 8-byte magic, a little-endian u64 manifest
// length, a JSON manifest (graph, poses, grid shapes, config, rng), and a
// binary payload of little-endian float64 sections (occupancy cells are u8).
// Window keyframes keep their images so optimization can resume; older
// keyframes persist as poses only.
void save_snapshot(const std::string& path, const EngineState& state,
                   const HarnessConfig& config);

// Inverse of save_snapshot. Renders from the loaded state are bit-identical
// to renders from the saved one. Throws SnapshotError.
struct LoadedSnapshot {
  EngineState state;
  HarnessConfig config;
};
LoadedSnapshot load_snapshot(const std::string& path);

}  // namespace gsmem
