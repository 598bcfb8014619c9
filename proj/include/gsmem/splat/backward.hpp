// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "gsmem/core/camera.hpp"
#include "gsmem/core/image.hpp"
#include "gsmem/splat/field.hpp"
#include "gsmem/splat/projection.hpp"

namespace gsmem {

// Per-parameter gradients, same SoA layout as GaussianField.
struct FieldGradients {
  std::vector<double> position;       // 3N
  std::vector<double> log_scale;      // 3N
  std::vector<double> rotation;       // 4N
  std::vector<double> opacity_logit;  // N
  std::vector<double> color;          // 3N

  void assign_zero(size_t n) {
    position.assign(3 * n, 0.0);
    log_scale.assign(3 * n, 0.0);
    rotation.assign(4 * n, 0.0);
    opacity_logit.assign(n, 0.0);
    color.assign(3 * n, 0.0);
  }
};

// Reverse-mode gradients of the rasterizer. grad_color (3 planes) and
// grad_depth (1 plane, may be null) are the output cotangents; the result is
// d(sum of cotangent-weighted outputs)/d(parameters), accumulated (+=) into
// grads, which must already be sized for the field. Gaussians culled in the
// forward pass receive zero gradient, as do splats whose per-pixel alpha sits
// at the clamp.
void render_backward(const GaussianField& field, const Camera& cam,
                     const RasterSettings& rs, const ImageF& grad_color,
                     const ImageF* grad_depth, FieldGradients* grads);

}  // namespace gsmem
