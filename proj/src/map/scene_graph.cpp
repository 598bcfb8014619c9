// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/map/scene_graph.hpp"

#include <algorithm>

namespace gsmem {

void SceneGraph::ingest(const std::vector<Detection>& detections) {
  for (const Detection& det : detections) {
    SceneGraphNode* best = nullptr;
    double best_iou = 0.0;
    for (SceneGraphNode& node : nodes_) {
      if (node.label != det.label) continue;
      if ((node.bbox.centroid() - det.bbox.centroid()).norm() >= cfg_.max_centroid_dist)
        continue;
      const double iou = aabb_iou(node.bbox, det.bbox);
      if (iou <= cfg_.min_iou) continue;
      if (best == nullptr || iou > best_iou) {
        best = &node;
        best_iou = iou;
      }
    }
    if (best != nullptr) {
      best->bbox = Aabb::united(best->bbox, det.bbox);
      best->observation_count += 1;
      if (det.confidence > best->best_confidence) {
        best->best_confidence = det.confidence;
        best->best_pose = det.observing_pose;
      }
    } else {
      SceneGraphNode node;
      node.id = next_id_++;
      node.label = det.label;
      node.bbox = det.bbox;
      node.best_confidence = det.confidence;
      node.best_pose = det.observing_pose;
      node.observation_count = 1;
      nodes_.push_back(std::move(node));
    }
  }
}

std::vector<SceneGraph::ObjectSummary> SceneGraph::list_objects() const {
  std::vector<ObjectSummary> out;
  out.reserve(nodes_.size());
  for (const SceneGraphNode& n : nodes_)
    out.push_back({n.id, n.label, n.bbox.centroid(), n.best_confidence});
  std::sort(out.begin(), out.end(),
            [](const ObjectSummary& a, const ObjectSummary& b) { return a.id < b.id; });
  return out;
}

void SceneGraph::restore(std::vector<SceneGraphNode> nodes, uint64_t next_id) {
  nodes_ = std::move(nodes);
  next_id_ = next_id;
}

}  // namespace gsmem
