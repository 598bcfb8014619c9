// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gsmem/core/camera.hpp"
#include "gsmem/core/geometry.hpp"
#include "gsmem/map/scene_graph.hpp"
#include "gsmem/splat/field.hpp"

namespace gsmem {

enum class RoiProvenance { object, semantic };

// A 3D box selected for re-rendering, found either through the object graph
// (ranked by an external relevance oracle) or by thresholding the language
// field and clustering the surviving Gaussians.
struct RegionOfInterest {
  Aabb bbox;  // every side >= the configured minimum after padding
  RoiProvenance provenance = RoiProvenance::object;
  uint64_t source_id = 0;  // graph node id, or 1-based semantic cluster rank
  double score = 0.0;      // rank score (object) or mean cosine sim (semantic)
  std::vector<uint32_t> member_gaussians;  // semantic only, ascending
  std::optional<Camera> best_pose;         // object only: best detection pose
};

struct RetrievalConfig {
  int k_obj = 10;           // object-level ROIs kept
  int k_cluster = 3;        // semantic-level ROIs kept
  double tau_clip = 0.25;   // cosine-similarity floor, strictly exceeded
  double tau_d = 0.15;      // clustering neighbor radius, meters (inclusive)
  int min_cluster_size = 20;
  double semantic_pad = 0.05;  // meters added around member boxes
  double min_box_side = 0.05;  // degenerate sides are expanded to this
  double area_target = 0.4;    // target projected-area fraction A*
  double area_sigma = 0.15;    // area tolerance, image-area fraction
  double orbit_radius_factor = 1.5;  // x bbox diagonal
  double orbit_radius_floor = 0.8;   // meters
  double azimuth_step_deg = 10.0;              // candidate orbit spacing
  std::vector<double> elevations_deg = {-10.0, 0.0, 15.0};
  int view_width = 256;
  int view_height = 256;
  double view_fov_deg = 45.0;  // horizontal field of view of candidate views
};

// Orders graph objects by relevance to a question, most relevant first. The
// returned ids refer to graph node ids; unknown or duplicate ids are ignored.
class ObjectRanker {
 public:
  virtual ~ObjectRanker() = default;
  virtual std::vector<uint64_t> rank_objects(
      const std::string& question,
      const std::vector<SceneGraph::ObjectSummary>& objects) const = 0;
};

// Top-k_obj ranked objects as ROIs. A throwing ranker yields an empty list so
// the caller can fall through to exploration.
std::vector<RegionOfInterest> retrieve_object_rois(const SceneGraph& graph,
                                                   const std::string& question,
                                                   const ObjectRanker& ranker,
                                                   const RetrievalConfig& cfg = {});

// Gaussians whose best similarity against any query embedding strictly
// exceeds tau_clip, clustered by single-linkage over tau_d-radius neighbors;
// components smaller than min_cluster_size are dropped and the top k_cluster
// by mean similarity become ROIs (ties broken by smallest member index).
std::vector<RegionOfInterest> retrieve_semantic_rois(
    const GaussianField& field,
    const std::vector<std::vector<double>>& query_embeddings,
    const RetrievalConfig& cfg = {});

}  // namespace gsmem
