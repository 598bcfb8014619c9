// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <map>

#include "gsmem/core/camera.hpp"
#include "gsmem/core/image.hpp"

namespace gsmem {

// One posed RGB-D observation. Depth is metric camera-space z; 0 marks
// pixels with no depth return.
struct Keyframe {
  uint64_t id = 0;
  Camera camera;
  ImageF color;  // 3 planes in [0, 1]
  ImageF depth;  // 1 plane, meters

  bool dims_match_camera() const {
    return color.width == camera.k.width && color.height == camera.k.height &&
           depth.width == camera.k.width && depth.height == camera.k.height;
  }
};

// Keyframe store plus the sliding optimization window (FIFO over the most
// recent insertions). Ids are assigned monotonically starting at 1.
struct WindowState {
  int window_size = 10;
  std::deque<uint64_t> window;            // ids, oldest first, size <= window_size
  std::map<uint64_t, Keyframe> keyframes; // every keyframe ever inserted
  uint64_t last_keyframe_id = 0;          // 0 until the first insertion

  bool empty() const { return keyframes.empty(); }
  const Keyframe& last_keyframe() const { return keyframes.at(last_keyframe_id); }

  // Stores the frame under a fresh id and slides the window.
  uint64_t insert(Keyframe frame) {
    const uint64_t id = last_keyframe_id + 1;
    frame.id = id;
    keyframes.emplace(id, std::move(frame));
    window.push_back(id);
    while ((int)window.size() > window_size) window.pop_front();
    last_keyframe_id = id;
    return id;
  }
};

}  // namespace gsmem
