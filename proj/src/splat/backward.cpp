// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/splat/backward.hpp"

#include <cassert>

#include "gsmem/kernels/kernels.hpp"
#include "gsmem/splat/rasterizer.hpp"
#include "chain.hpp"

namespace gsmem {

void render_backward(const GaussianField& field, const Camera& cam,
                     const RasterSettings& rs, const ImageF& grad_color,
                     const ImageF* grad_depth, FieldGradients* grads) {
  const int w = cam.k.width, h = cam.k.height;
  const size_t np = (size_t)w * h;
  assert(grad_color.width == w && grad_color.height == h && grad_color.channels == 3);
  assert(grads->opacity_logit.size() == field.size());

  const auto& kt = kernels::active();
  const kernels::RasterParams rp{rs.q_cut, rs.alpha_max, rs.t_min};
  const auto splats = prepare_splats(field, cam, rs);

  // Forward replay for the per-pixel totals U = gc . C + gd . D.
  ImageF color(w, h, 3), depth(w, h, 1);
  std::vector<double> trans(np, 1.0);
  for (const PreparedSplat& s : splats)
    for (int y = s.y0; y <= s.y1; ++y) {
      const size_t row = (size_t)y * w;
      kt.splat_row_forward(s.pix, rp, (double)y, s.x0, s.x1 + 1, trans.data() + row + s.x0,
                           color.plane(0) + row + s.x0, color.plane(1) + row + s.x0,
                           color.plane(2) + row + s.x0, depth.plane(0) + row + s.x0,
                           nullptr);
    }

  std::vector<double> u(np, 0.0), p_acc(np, 0.0);
  {
    const double* gr = grad_color.plane(0);
    const double* gg = grad_color.plane(1);
    const double* gb = grad_color.plane(2);
    const double* gd = grad_depth ? grad_depth->plane(0) : nullptr;
    const double* cr = color.plane(0);
    const double* cg = color.plane(1);
    const double* cb = color.plane(2);
    const double* dz = depth.plane(0);
    for (size_t p = 0; p < np; ++p) {
      u[p] = gr[p] * cr[p] + gg[p] * cg[p] + gb[p] * cb[p];
      if (gd) u[p] += gd[p] * dz[p];
    }
  }

  // Gradient replay, front to back again with fresh transmittance.
  std::fill(trans.begin(), trans.end(), 1.0);
  for (const PreparedSplat& s : splats) {
    kernels::SplatGrad2d acc;
    for (int y = s.y0; y <= s.y1; ++y) {
      const size_t row = (size_t)y * w;
      const size_t off = row + s.x0;
      kt.splat_row_backward(s.pix, rp, (double)y, s.x0, s.x1 + 1, trans.data() + off,
                            p_acc.data() + off, u.data() + off,
                            grad_color.plane(0) + off, grad_color.plane(1) + off,
                            grad_color.plane(2) + off,
                            grad_depth ? grad_depth->plane(0) + off : nullptr, acc);
    }

    const size_t i = s.id;
    grads->color[3 * i] += acc.color[0];
    grads->color[3 * i + 1] += acc.color[1];
    grads->color[3 * i + 2] += acc.color[2];

    const auto ctx = detail::make_chain_context(field, i, cam, rs);
    const auto pg = detail::chain_to_params(ctx, acc);
    grads->position[3 * i] += pg.position.x;
    grads->position[3 * i + 1] += pg.position.y;
    grads->position[3 * i + 2] += pg.position.z;
    grads->log_scale[3 * i] += pg.log_scale.x;
    grads->log_scale[3 * i + 1] += pg.log_scale.y;
    grads->log_scale[3 * i + 2] += pg.log_scale.z;
    grads->rotation[4 * i] += pg.rotation.w;
    grads->rotation[4 * i + 1] += pg.rotation.x;
    grads->rotation[4 * i + 2] += pg.rotation.y;
    grads->rotation[4 * i + 3] += pg.rotation.z;
    grads->opacity_logit[i] += pg.opacity_logit;
  }
}

}  // namespace gsmem
