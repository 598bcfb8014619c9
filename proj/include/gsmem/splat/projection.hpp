// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "gsmem/core/camera.hpp"
#include "gsmem/core/math.hpp"

namespace gsmem {

struct RasterSettings {
  double near_plane = 0.05;  // splats at or before this camera depth are culled
  double cull_sigma = 3.0;   // whole-splat cull margin, in projected std devs
  double cov_reg = 0.3;      // px^2 added to the cov2d diagonal before inversion
  double q_cut = 4.5;        // per-pixel Gaussian support bound (0.5 * cull_sigma^2)
  double alpha_max = 0.99;
  double t_min = 1e-4;       // transmittance early-out
};

// Screen-space footprint of one Gaussian. cov2d is the unregularized
// symmetric 2x2 covariance (a, b, c); jac the 2x3 perspective Jacobian at the
// transformed mean, row-major.
struct ProjectedSplat {
  Vec2 mean2d;
  double cov2d[3];
  double depth;
  double jac[6];
};

// EWA-style projection: mean via the pinhole map, covariance via the local
// linearization cov2d = J R Sigma R^T J^T. Returns nullopt when the splat is
// behind the near plane or its mean lies outside the image by more than
// cull_sigma projected standard deviations.
std::optional<ProjectedSplat> project_gaussian(const Vec3& position, const Vec3& log_scale,
                                               const Vec4& rotation, const Camera& cam,
                                               const RasterSettings& rs = {});

// Largest eigenvalue of the regularized screen covariance; the rasterized
// radius is cull_sigma * sqrt of this.
double cov2d_max_eigenvalue(const double cov2d[3], double cov_reg);

}  // namespace gsmem
