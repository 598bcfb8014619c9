// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsmem/core/camera.hpp"
#include "gsmem/core/geometry.hpp"

namespace gsmem {

// One detector output: a labeled world-space box observed from a pose.
struct Detection {
  std::string label;
  double confidence = 0.0;  // in [0, 1]
  Aabb bbox;
  Camera observing_pose;
};

// A persistent object hypothesis merged from matching detections. best_pose
// is the pose of the highest-confidence merged detection.
struct SceneGraphNode {
  uint64_t id = 0;
  std::string label;
  Aabb bbox;
  double best_confidence = 0.0;
  Camera best_pose;
  int observation_count = 0;
};

// Object-level memory. A detection merges into a node iff the labels match,
// the box centroids are within max_centroid_dist, and the 3D IoU exceeds
// min_iou; otherwise it founds a new node.
class SceneGraph {
 public:
  struct MatchConfig {
    double max_centroid_dist = 0.5;  // meters
    double min_iou = 0.1;
  };

  struct ObjectSummary {
    uint64_t id;
    std::string label;
    Vec3 centroid;
    double confidence;
  };

  SceneGraph() = default;
  explicit SceneGraph(const MatchConfig& cfg) : cfg_(cfg) {}

  void ingest(const std::vector<Detection>& detections);
  const std::vector<SceneGraphNode>& nodes() const { return nodes_; }
  std::vector<ObjectSummary> list_objects() const;  // ascending id

  // Snapshot plumbing: replaces the node set wholesale.
  void restore(std::vector<SceneGraphNode> nodes, uint64_t next_id);
  uint64_t next_id() const { return next_id_; }

 private:
  MatchConfig cfg_;
  std::vector<SceneGraphNode> nodes_;
  uint64_t next_id_ = 1;
};

}  // namespace gsmem
