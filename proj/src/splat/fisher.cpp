// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/splat/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gsmem/splat/rasterizer.hpp"
#include "chain.hpp"

namespace gsmem {
namespace {

constexpr int kTile = 16;

// The screen-to-parameter chain is linear in the five screen cotangents
// (mean_x, mean_y, conic_a, conic_b, conic_c). Column k of M holds the
// 10 parameter gradients (position, log_scale, quaternion) for a unit k-th
// cotangent; the 5x5 Gram M^T M turns a squared parameter-gradient sum into a
// quadratic form on screen cotangents.
struct FisherSplat {
  double gram[5][5];
  double opa_chain;  // d(alpha_raw)/d(opacity_logit) factor: sig * (1 - sig)
};

FisherSplat make_fisher_splat(const GaussianField& field, size_t i, const Camera& cam,
                              const RasterSettings& rs) {
  const auto ctx = detail::make_chain_context(field, i, cam, rs);
  double m[10][5];
  for (int k = 0; k < 5; ++k) {
    kernels::SplatGrad2d g;
    (k == 0 ? g.mean_x
     : k == 1 ? g.mean_y
     : k == 2 ? g.conic_a
     : k == 3 ? g.conic_b
              : g.conic_c) = 1.0;
    const auto pg = detail::chain_to_params(ctx, g);
    m[0][k] = pg.position.x;
    m[1][k] = pg.position.y;
    m[2][k] = pg.position.z;
    m[3][k] = pg.log_scale.x;
    m[4][k] = pg.log_scale.y;
    m[5][k] = pg.log_scale.z;
    m[6][k] = pg.rotation.w;
    m[7][k] = pg.rotation.x;
    m[8][k] = pg.rotation.y;
    m[9][k] = pg.rotation.z;
  }
  FisherSplat fs;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      double s = 0.0;
      for (int r = 0; r < 10; ++r) s += m[r][a] * m[r][b];
      fs.gram[a][b] = s;
    }
  fs.opa_chain = ctx.sig * (1.0 - ctx.sig);
  return fs;
}

struct Stash {
  int idx;          // index into the prepared list
  double g, alpha_raw, alpha, w, t, dx, dy;
};

}  // namespace

double fisher_trace(const GaussianField& field, const Camera& cam,
                    const RasterSettings& rs, const PixelRect& rect) {
  const int w = cam.k.width, h = cam.k.height;
  const int rx0 = std::max(0, rect.x0);
  const int ry0 = std::max(0, rect.y0);
  const int rx1 = rect.x1 < 0 ? w : std::min(w, rect.x1);
  const int ry1 = rect.y1 < 0 ? h : std::min(h, rect.y1);
  if (rx0 >= rx1 || ry0 >= ry1) return 0.0;

  const auto splats = prepare_splats(field, cam, rs);
  if (splats.empty()) return 0.0;

  std::vector<FisherSplat> fsplats(splats.size());
  for (size_t k = 0; k < splats.size(); ++k)
    fsplats[k] = make_fisher_splat(field, splats[k].id, cam, rs);

  const int tiles_x = (w + kTile - 1) / kTile;
  const int tiles_y = (h + kTile - 1) / kTile;
  std::vector<std::vector<int>> tile_lists((size_t)tiles_x * tiles_y);
  for (size_t k = 0; k < splats.size(); ++k) {
    const auto& s = splats[k];
    for (int ty = s.y0 / kTile; ty <= s.y1 / kTile; ++ty)
      for (int tx = s.x0 / kTile; tx <= s.x1 / kTile; ++tx)
        tile_lists[(size_t)ty * tiles_x + tx].push_back((int)k);
  }

  double trace = 0.0;
  std::vector<Stash> stash;
  stash.reserve(64);

  for (int ty = ry0 / kTile; ty * kTile < ry1; ++ty)
    for (int tx = rx0 / kTile; tx * kTile < rx1; ++tx) {
      const auto& list = tile_lists[(size_t)ty * tiles_x + tx];
      if (list.empty()) continue;
      const int px0 = std::max(rx0, tx * kTile), px1 = std::min(rx1, (tx + 1) * kTile);
      const int py0 = std::max(ry0, ty * kTile), py1 = std::min(ry1, (ty + 1) * kTile);

      for (int y = py0; y < py1; ++y)
        for (int x = px0; x < px1; ++x) {
          stash.clear();
          double t = 1.0;
          for (int k : list) {
            if (t < rs.t_min) break;
            const auto& s = splats[k];
            if (x < s.x0 || x > s.x1 || y < s.y0 || y > s.y1) continue;
            const double dx = x - s.pix.mean_x, dy = y - s.pix.mean_y;
            const double q = 0.5 * (s.pix.conic_a * dx * dx + s.pix.conic_c * dy * dy) +
                             s.pix.conic_b * dx * dy;
            if (q < 0.0 || q > rs.q_cut) continue;
            const double g = std::exp(-q);
            const double alpha_raw = s.pix.opacity * g;
            const double alpha = std::min(alpha_raw, rs.alpha_max);
            stash.push_back({k, g, alpha_raw, alpha, alpha * t, t, dx, dy});
            t *= 1.0 - alpha;
          }
          if (stash.empty()) continue;

          for (int c = 0; c < 3; ++c) {
            double s_after = 0.0;
            for (int k = (int)stash.size() - 1; k >= 0; --k) {
              const Stash& e = stash[k];
              const auto& s = splats[e.idx];
              const double col = s.pix.color[c];
              const double d_alpha = e.t * col - s_after / (1.0 - e.alpha);
              s_after += e.w * col;

              trace += e.w * e.w;  // color parameter of this channel
              if (e.alpha_raw >= rs.alpha_max) continue;

              const auto& fs = fsplats[e.idx];
              const double d_logit = d_alpha * e.g * fs.opa_chain;
              trace += d_logit * d_logit;

              const double dq = -d_alpha * e.alpha_raw;
              const double v0 = -(s.pix.conic_a * e.dx + s.pix.conic_b * e.dy);
              const double v1 = -(s.pix.conic_c * e.dy + s.pix.conic_b * e.dx);
              const double v2 = 0.5 * e.dx * e.dx;
              const double v3 = e.dx * e.dy;
              const double v4 = 0.5 * e.dy * e.dy;
              const double vv[5] = {v0, v1, v2, v3, v4};
              double quad = 0.0;
              for (int a = 0; a < 5; ++a) {
                double row = 0.0;
                for (int b = 0; b < 5; ++b) row += fs.gram[a][b] * vv[b];
                quad += vv[a] * row;
              }
              trace += dq * dq * quad;
            }
          }
        }
    }

  return trace;
}

}  // namespace gsmem
