// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "gsmem/retrieval/retrieval.hpp"
#include "gsmem/splat/rasterizer.hpp"
#include "gsmem/vol/tsdf.hpp"

namespace gsmem {

// A fully scored candidate viewpoint. s_vis counts visible probe points out
// of 14, s_area applies a Gaussian penalty around the target projected area,
// s_opa is the mean rendered alpha inside the projected box, and
// s_final = s_vis + s_area + s_opa (so s_final <= 3).
struct ViewpointScore {
  Camera pose;
  double s_vis = 0.0;
  double s_area = 0.0;
  double s_opa = 0.0;
  double s_final = 0.0;
};

struct Phase1Score {
  double s_vis = 0.0;
  double s_area = 0.0;
};

// The 14 probe points of a box: its 8 vertices and 6 face centers.
std::array<Vec3, 14> box_probe_points(const Aabb& box);

// Gaussian area penalty exp(-(a - A*)^2 / (2 sigma_a^2)) for an area given as
// a fraction of the image.
double area_score(double area_fraction, const RetrievalConfig& cfg);

// Fraction of the image covered by the convex hull of the box's projected
// vertices, clipped to the image rectangle. Vertices closer than the near
// plane are dropped; fewer than 3 projectable vertices yields 0.
double projected_area_fraction(const Camera& cam, const Aabb& box,
                               double near_plane = 0.05);

// Candidate viewpoints on a circle around the box centroid, azimuth-major
// with elevations innermost. The defaults (10 degree azimuth steps, three
// elevations of -10, 0 and +15 degrees) yield 108 candidates. Poses inside
// occupied TSDF voxels are discarded. Every pose looks at the centroid with
// zero roll.
std::vector<Camera> sample_candidate_poses(const RegionOfInterest& roi,
                                           const TsdfGrid& tsdf,
                                           const RetrievalConfig& cfg = {});

// Visibility of the 14 probe points (TSDF ray marching) and the projected
// area penalty for one candidate.
Phase1Score score_phase1(const Camera& pose, const RegionOfInterest& roi,
                         const TsdfGrid& tsdf, const RetrievalConfig& cfg = {});

// Mean rendered alpha over the pixels inside the axis-aligned bounds of the
// box's projected vertices, clipped to the image; 0 when nothing projects.
double score_phase2(const Camera& pose, const RegionOfInterest& roi,
                    const GaussianField& field, const RasterSettings& rs = {});

// Two-phase selection: rank all candidates by s_vis + s_area, advance exactly
// the top 10 (fewer if fewer survive), then pick the highest s_final. Ties
// resolve to the earliest candidate in generation order, i.e. lowest azimuth
// index then lowest elevation index. Empty candidate set yields nullopt.
std::optional<ViewpointScore> select_optimal_view(const RegionOfInterest& roi,
                                                  const GaussianField& field,
                                                  const TsdfGrid& tsdf,
                                                  const RetrievalConfig& cfg = {},
                                                  const RasterSettings& rs = {});

// Renders the chosen viewpoint, plus the best detection pose when the ROI
// came from the object graph: 1-2 images.
std::vector<RenderOutput> render_roi_views(const RegionOfInterest& roi,
                                           const GaussianField& field,
                                           const std::optional<Camera>& optimal_view,
                                           const RasterSettings& rs = {});

}  // namespace gsmem
