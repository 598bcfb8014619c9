// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "gsmem/core/image.hpp"
#include "gsmem/map/keyframe.hpp"
#include "gsmem/splat/field.hpp"
#include "gsmem/splat/projection.hpp"

namespace gsmem {

// Seam for the per-pixel semantic encoder. Returned vectors are unit-norm or
// exactly zero; a zero pixel feature means "no semantic evidence here".
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dim() const = 0;
  virtual FeatureMap embed_image(const Keyframe& frame) const = 0;
  virtual std::vector<double> embed_text(const std::string& text) const = 0;
};

struct AggregationConfig {
  bool renormalize = true;  // store unit-norm features (cosine queries)
  RasterSettings raster;
};

// Weight-consistent reverse aggregation: every pixel's 2D feature is
// distributed onto the Gaussians that rendered it, weighted by the exact
// per-pixel blending weights of the forward rasterization, then folded into
// the running weighted average
//   f_i <- (W_i * f_i + sum_k sum_p w_{i,p,k} f2d_{p,k}) / (W_i + sum w)
//   W_i <- W_i + sum_k sum_p w_{i,p,k}
// Pixels whose feature is exactly zero carry no evidence and are skipped, so
// never-observed Gaussians keep W_i = 0 and a zero feature. Throws
// std::invalid_argument on a provider/field dimension mismatch.
void aggregate_features(GaussianField& field, const std::vector<const Keyframe*>& frames,
                        const EmbeddingProvider& provider, const AggregationConfig& cfg = {});

// Cosine similarity of each Gaussian's stored feature against a unit query;
// Gaussians with no accumulated semantic weight score -1.
std::vector<double> query_similarity(const GaussianField& field,
                                     const std::vector<double>& text_embedding);

}  // namespace gsmem
