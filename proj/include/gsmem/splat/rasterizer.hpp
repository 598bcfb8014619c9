// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "gsmem/core/camera.hpp"
#include "gsmem/core/image.hpp"
#include "gsmem/kernels/kernels.hpp"
#include "gsmem/splat/field.hpp"
#include "gsmem/splat/projection.hpp"

namespace gsmem {

struct RenderChannels {
  bool contributions = false;
  bool feature = false;
};

struct Contribution {
  uint32_t id;
  double w;  // blending weight of this Gaussian at this pixel
};

struct RenderOutput {
  ImageF color;  // 3 planes, zero where nothing renders
  ImageF depth;  // blended camera-space z
  ImageF alpha;  // 1 - final transmittance, in [0, 1]
  FeatureMap feature;                                // dim 0 unless requested
  std::vector<std::vector<Contribution>> contributions;  // empty unless requested
};

// A projected splat ready for compositing: screen constants plus its clipped
// pixel bounding box (inclusive). Lists are sorted front to back.
struct PreparedSplat {
  kernels::SplatPix pix;
  uint32_t id;
  int x0, y0, x1, y1;
};

std::vector<PreparedSplat> prepare_splats(const GaussianField& field, const Camera& cam,
                                          const RasterSettings& rs);

// Front-to-back alpha compositing of the whole field. Deterministic and pure:
// identical inputs give identical images, and permuting the insertion order
// of the field leaves every channel unchanged.
RenderOutput rasterize(const GaussianField& field, const Camera& cam,
                       const RasterSettings& rs = {}, const RenderChannels& ch = {});

}  // namespace gsmem
