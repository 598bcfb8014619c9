// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/map/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsmem/kernels/kernels.hpp"
#include "gsmem/splat/backward.hpp"
#include "gsmem/splat/rasterizer.hpp"

namespace gsmem {

namespace {
constexpr int kFlowGrid = 32;
}

double average_flow(const Keyframe& frame, const Keyframe& last_kf) {
  const Camera& src = last_kf.camera;
  const Camera& dst = frame.camera;
  const int w = src.k.width, h = src.k.height;
  double sum = 0.0;
  int count = 0;
  for (int gy = 0; gy < kFlowGrid; ++gy) {
    const int iy = std::min(h - 1, (int)((gy + 0.5) * h / kFlowGrid));
    for (int gx = 0; gx < kFlowGrid; ++gx) {
      const int ix = std::min(w - 1, (int)((gx + 0.5) * w / kFlowGrid));
      const double d = last_kf.depth.at(0, iy, ix);
      if (d <= 0.0) continue;
      const Vec3 p = src.backproject(ix, iy, d);
      Vec2 uv;
      if (!dst.project(p, &uv)) continue;
      if (uv.x < 0.0 || uv.x > dst.k.width - 1 || uv.y < 0.0 || uv.y > dst.k.height - 1)
        continue;
      const double dx = uv.x - ix, dy = uv.y - iy;
      sum += std::sqrt(dx * dx + dy * dy);
      ++count;
    }
  }
  if (count == 0) return std::numeric_limits<double>::infinity();
  return sum / count;
}

namespace {

void seed_uncovered_blocks(GaussianField& field, const Keyframe& frame,
                           const RasterSettings& rs, const SeedingConfig& cfg) {
  const int w = frame.camera.k.width, h = frame.camera.k.height;
  ImageF alpha;
  if (field.size() > 0) {
    alpha = rasterize(field, frame.camera, rs).alpha;
  } else {
    alpha = ImageF(w, h, 1);
  }
  const double logit_opacity = logit(cfg.opacity);
  for (int by = 0; by < h; by += cfg.block) {
    for (int bx = 0; bx < w; bx += cfg.block) {
      const int x1 = std::min(w, bx + cfg.block), y1 = std::min(h, by + cfg.block);
      double asum = 0.0;
      for (int y = by; y < y1; ++y)
        for (int x = bx; x < x1; ++x) asum += alpha.at(0, y, x);
      if (asum >= cfg.alpha_threshold * (x1 - bx) * (y1 - by)) continue;

      // Representative pixel: the block center, falling back to the first
      // pixel with a depth return; blocks with no return stay unseeded.
      int px = std::min(x1 - 1, bx + cfg.block / 2);
      int py = std::min(y1 - 1, by + cfg.block / 2);
      if (frame.depth.at(0, py, px) <= 0.0) {
        px = -1;
        for (int y = by; y < y1 && px < 0; ++y)
          for (int x = bx; x < x1; ++x)
            if (frame.depth.at(0, y, x) > 0.0) {
              px = x;
              py = y;
              break;
            }
        if (px < 0) continue;
      }
      const double d = frame.depth.at(0, py, px);
      Gaussian g;
      g.position = frame.camera.backproject(px, py, d);
      const double sigma_world = cfg.sigma_px * d / frame.camera.k.fx;
      const double ls = std::log(std::max(sigma_world, 1e-6));
      g.log_scale = {ls, ls, ls};
      g.rotation = {1, 0, 0, 0};
      g.opacity_logit = logit_opacity;
      g.color = {frame.color.at(0, py, px), frame.color.at(1, py, px),
                 frame.color.at(2, py, px)};
      field.add(g);
    }
  }
}

}  // namespace

bool maybe_insert_keyframe(GaussianField& field, const Keyframe& frame, WindowState& state,
                           double flow_threshold, const RasterSettings& rs,
                           const SeedingConfig& seed) {
  if (!state.empty()) {
    const double flow = average_flow(frame, state.last_keyframe());
    if (!(flow > flow_threshold)) return false;
  }
  seed_uncovered_blocks(field, frame, rs, seed);
  state.insert(frame);
  return true;
}

StepResult optimize_step(GaussianField& field, const WindowState& state, Rng& rng,
                         const OptimizerConfig& cfg, const RasterSettings& rs) {
  StepResult result;

  // T = window plus extra_frames sampled uniformly without replacement from
  // the keyframes outside it (ordered scan keeps the draw reproducible).
  std::vector<uint64_t> ids(state.window.begin(), state.window.end());
  std::vector<uint64_t> outside;
  for (const auto& [id, kf] : state.keyframes)
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) outside.push_back(id);
  const int extra = std::min<int>(cfg.extra_frames, (int)outside.size());
  for (int j = 0; j < extra; ++j) {
    std::uniform_int_distribution<size_t> pick(j, outside.size() - 1);
    std::swap(outside[j], outside[pick(rng)]);
    ids.push_back(outside[j]);
  }
  std::sort(ids.begin(), ids.end());
  result.frames_used = ids;
  if (ids.empty() || field.size() == 0) return result;

  const auto& kt = kernels::active();
  FieldGradients grads;
  grads.assign_zero(field.size());

  for (const uint64_t id : ids) {
    const Keyframe& kf = state.keyframes.at(id);
    const Camera& cam = kf.camera;
    const int w = cam.k.width, h = cam.k.height;
    const double inv_px = 1.0 / ((double)w * h);

    RenderOutput out = rasterize(field, cam, rs);
    ImageF gcolor(w, h, 3);
    const double lsum = kt.l1_grad((int)(3 * out.color.pixels()), out.color.data.data(),
                                   kf.color.data.data(), inv_px, gcolor.data.data());
    result.loss_rgb += lsum * inv_px;

    ImageF gdepth(w, h, 1);
    const double dsum =
        kt.l1_grad_masked((int)out.depth.pixels(), out.depth.data.data(),
                          kf.depth.data.data(), cfg.lambda_depth * inv_px,
                          gdepth.data.data());
    result.loss_depth += dsum * inv_px;

    render_backward(field, cam, rs, gcolor, &gdepth, &grads);
  }

  const size_t n = field.size();
  const double lr_pos = cfg.lr_position * std::max(field.extent(), 1.0);
  auto& pos = field.positions();
  auto& lsc = field.log_scales();
  auto& col = field.colors();
  auto& opa = field.opacity_logits();
  for (size_t i = 0; i < 3 * n; ++i) {
    pos[i] -= lr_pos * grads.position[i];
    if (grads.log_scale[i] != 0.0)
      lsc[i] = std::clamp(lsc[i] - cfg.lr_scale * grads.log_scale[i], cfg.log_scale_min,
                          cfg.log_scale_max);
    col[i] -= cfg.lr_color * grads.color[i];
  }
  for (size_t i = 0; i < n; ++i)
    if (grads.opacity_logit[i] != 0.0)
      opa[i] = std::clamp(opa[i] - cfg.lr_opacity * grads.opacity_logit[i], -cfg.logit_clamp,
                          cfg.logit_clamp);
  for (size_t i = 0; i < n; ++i) {
    const Vec4 q = field.rotation(i);
    const Vec4 step{cfg.lr_rotation * grads.rotation[4 * i],
                    cfg.lr_rotation * grads.rotation[4 * i + 1],
                    cfg.lr_rotation * grads.rotation[4 * i + 2],
                    cfg.lr_rotation * grads.rotation[4 * i + 3]};
    if (step.w == 0.0 && step.x == 0.0 && step.y == 0.0 && step.z == 0.0) continue;
    field.set_rotation(i, {q.w - step.w, q.x - step.x, q.y - step.y, q.z - step.z});
  }
  return result;
}

}  // namespace gsmem
