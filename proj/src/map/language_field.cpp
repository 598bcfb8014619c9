// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/map/language_field.hpp"

#include <cmath>
#include <stdexcept>

#include "gsmem/splat/rasterizer.hpp"

namespace gsmem {

void aggregate_features(GaussianField& field, const std::vector<const Keyframe*>& frames,
                        const EmbeddingProvider& provider, const AggregationConfig& cfg) {
  const int dim = field.feature_dim();
  if (provider.dim() != dim)
    throw std::invalid_argument("embedding dimension does not match the field");
  const size_t n = field.size();
  if (n == 0 || frames.empty()) return;

  std::vector<double> acc((size_t)dim * n, 0.0);
  std::vector<double> wsum(n, 0.0);

  RenderChannels ch;
  ch.contributions = true;
  for (const Keyframe* kf : frames) {
    const FeatureMap fmap = provider.embed_image(*kf);
    if (fmap.dim != dim) throw std::invalid_argument("provider returned a mismatched map");
    const RenderOutput out = rasterize(field, kf->camera, cfg.raster, ch);
    const int w = kf->camera.k.width, h = kf->camera.k.height;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double* f = fmap.pixel(y, x);
        bool zero = true;
        for (int c = 0; c < dim && zero; ++c) zero = f[c] == 0.0;
        if (zero) continue;
        for (const Contribution& cb : out.contributions[(size_t)y * w + x]) {
          double* a = acc.data() + (size_t)dim * cb.id;
          for (int c = 0; c < dim; ++c) a[c] += cb.w * f[c];
          wsum[cb.id] += cb.w;
        }
      }
    }
  }

  for (size_t i = 0; i < n; ++i) {
    if (!(wsum[i] > 0.0)) continue;
    const double w_old = field.feature_weight(i);
    const double w_new = w_old + wsum[i];
    double* f = field.feature(i);
    double norm2 = 0.0;
    for (int c = 0; c < dim; ++c) {
      f[c] = (w_old * f[c] + acc[(size_t)dim * i + c]) / w_new;
      norm2 += f[c] * f[c];
    }
    if (cfg.renormalize && norm2 > 1e-24) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (int c = 0; c < dim; ++c) f[c] *= inv;
    }
    field.set_feature_weight(i, w_new);
  }
}

std::vector<double> query_similarity(const GaussianField& field,
                                     const std::vector<double>& text_embedding) {
  const int dim = field.feature_dim();
  if ((int)text_embedding.size() != dim)
    throw std::invalid_argument("query dimension does not match the field");
  std::vector<double> sims(field.size(), -1.0);
  for (size_t i = 0; i < field.size(); ++i) {
    if (!(field.feature_weight(i) > 0.0)) continue;
    const double* f = field.feature(i);
    double dot = 0.0;
    for (int c = 0; c < dim; ++c) dot += f[c] * text_embedding[c];
    sims[i] = dot;
  }
  return sims;
}

}  // namespace gsmem
