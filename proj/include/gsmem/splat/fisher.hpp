// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsmem/core/camera.hpp"
#include "gsmem/splat/field.hpp"
#include "gsmem/splat/projection.hpp"

namespace gsmem {

// Half-open pixel rectangle; a negative x1/y1 means the full image.
struct PixelRect {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;
};

// Trace of the rendering Fisher information at this pose: the sum over RGB
// pixels and Gaussian parameters (position, scale, rotation, opacity logit,
// color) of squared partial derivatives of the rendered color. Depth is
// excluded. Nonnegative, zero for a view of empty space, and additive over
// disjoint pixel rectangles.
double fisher_trace(const GaussianField& field, const Camera& cam,
                    const RasterSettings& rs = {}, const PixelRect& rect = {});

}  // namespace gsmem
