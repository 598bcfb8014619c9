// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/splat/rasterizer.hpp"

#include <algorithm>
#include <cmath>

namespace gsmem {

std::vector<PreparedSplat> prepare_splats(const GaussianField& field, const Camera& cam,
                                          const RasterSettings& rs) {
  struct Keyed {
    PreparedSplat s;
    Vec3 pos;  // depth tie-break, keeps the order insertion-invariant
  };
  std::vector<Keyed> keyed;
  keyed.reserve(field.size());

  for (size_t i = 0; i < field.size(); ++i) {
    const auto proj =
        project_gaussian(field.position(i), field.log_scale(i), field.rotation(i), cam, rs);
    if (!proj) continue;

    const double a = proj->cov2d[0] + rs.cov_reg;
    const double b = proj->cov2d[1];
    const double c = proj->cov2d[2] + rs.cov_reg;
    const double det = a * c - b * b;
    if (det <= 1e-12) continue;  // degenerate even after regularization

    const double radius = rs.cull_sigma * std::sqrt(cov2d_max_eigenvalue(proj->cov2d, rs.cov_reg));
    Keyed k;
    k.s.x0 = std::max(0, (int)std::ceil(proj->mean2d.x - radius));
    k.s.x1 = std::min(cam.k.width - 1, (int)std::floor(proj->mean2d.x + radius));
    k.s.y0 = std::max(0, (int)std::ceil(proj->mean2d.y - radius));
    k.s.y1 = std::min(cam.k.height - 1, (int)std::floor(proj->mean2d.y + radius));
    if (k.s.x0 > k.s.x1 || k.s.y0 > k.s.y1) continue;

    k.s.id = (uint32_t)i;
    k.s.pix.mean_x = proj->mean2d.x;
    k.s.pix.mean_y = proj->mean2d.y;
    k.s.pix.conic_a = c / det;
    k.s.pix.conic_b = -b / det;
    k.s.pix.conic_c = a / det;
    k.s.pix.opacity = field.opacity(i);
    const Vec3 col = field.color(i);
    k.s.pix.color[0] = col.x;
    k.s.pix.color[1] = col.y;
    k.s.pix.color[2] = col.z;
    k.s.pix.depth = proj->depth;
    k.pos = field.position(i);
    keyed.push_back(k);
  }

  std::sort(keyed.begin(), keyed.end(), [](const Keyed& l, const Keyed& r) {
    if (l.s.pix.depth != r.s.pix.depth) return l.s.pix.depth < r.s.pix.depth;
    if (l.pos.x != r.pos.x) return l.pos.x < r.pos.x;
    if (l.pos.y != r.pos.y) return l.pos.y < r.pos.y;
    return l.pos.z < r.pos.z;
  });

  std::vector<PreparedSplat> out;
  out.reserve(keyed.size());
  for (const Keyed& k : keyed) out.push_back(k.s);
  return out;
}

RenderOutput rasterize(const GaussianField& field, const Camera& cam,
                       const RasterSettings& rs, const RenderChannels& ch) {
  const int w = cam.k.width, h = cam.k.height;
  RenderOutput out;
  out.color = ImageF(w, h, 3);
  out.depth = ImageF(w, h, 1);
  out.alpha = ImageF(w, h, 1);
  if (ch.feature) out.feature = FeatureMap(w, h, field.feature_dim());
  if (ch.contributions) out.contributions.resize((size_t)w * h);

  const auto& kt = kernels::active();
  const kernels::RasterParams rp{rs.q_cut, rs.alpha_max, rs.t_min};
  std::vector<double> trans((size_t)w * h, 1.0);
  std::vector<double> w_row(w);
  const bool want_w = ch.feature || ch.contributions;

  for (const PreparedSplat& s : prepare_splats(field, cam, rs)) {
    for (int y = s.y0; y <= s.y1; ++y) {
      const size_t row = (size_t)y * w;
      kt.splat_row_forward(s.pix, rp, (double)y, s.x0, s.x1 + 1, trans.data() + row + s.x0,
                           out.color.plane(0) + row + s.x0, out.color.plane(1) + row + s.x0,
                           out.color.plane(2) + row + s.x0, out.depth.plane(0) + row + s.x0,
                           want_w ? w_row.data() : nullptr);
      if (!want_w) continue;
      for (int i = 0; i <= s.x1 - s.x0; ++i) {
        const double wi = w_row[i];
        if (wi <= 0.0) continue;
        const size_t px = row + s.x0 + i;
        if (ch.contributions) out.contributions[px].push_back({s.id, wi});
        if (ch.feature)
          kt.axpy(field.feature_dim(), wi, field.feature(s.id),
                  out.feature.pixel(y, s.x0 + i));
      }
    }
  }

  double* alpha = out.alpha.plane(0);
  for (size_t p = 0; p < (size_t)w * h; ++p) alpha[p] = 1.0 - trans[p];
  return out;
}

}  // namespace gsmem
