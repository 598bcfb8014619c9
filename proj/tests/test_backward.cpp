// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gsmem/splat/backward.hpp"
#include "gsmem/splat/rasterizer.hpp"
#include "test_util.hpp"

using namespace gsmem;
using namespace gsmem::testutil;

namespace {

// Central-difference probe of the cotangent-weighted render loss at parameter
// (i, slot). Uses the raw parameter storage, so quaternion probes perturb the
// stored (possibly renormalized-at-use) values exactly like the analytic path.
double fd_grad(GaussianField& field, const Camera& cam, const RasterSettings& rs,
               const ImageF& gc, const ImageF* gd, size_t i, int slot, double h) {
  double* p = param_ptr(field, i, slot);
  const double save = *p;
  *p = save + h;
  const double lp = dot_loss(field, cam, rs, gc, gd);
  *p = save - h;
  const double lm = dot_loss(field, cam, rs, gc, gd);
  *p = save;
  return (lp - lm) / (2 * h);
}

void check_all_grads(GaussianField& field, const Camera& cam, const RasterSettings& rs,
                     const ImageF& gc, const ImageF* gd) {
  FieldGradients grads;
  grads.assign_zero(field.size());
  render_backward(field, cam, rs, gc, gd, &grads);

  int checked = 0;
  for (size_t i = 0; i < field.size(); ++i)
    for (int slot = 0; slot < kParamSlots; ++slot) {
      const double an = grad_at(grads, i, slot);
      const double fd = fd_grad(field, cam, rs, gc, gd, i, slot, 1e-4);
      const double tol = std::max(1e-6, 1e-3 * std::max(std::fabs(an), std::fabs(fd)));
      INFO("gaussian " << i << " slot " << slot << " analytic " << an << " fd " << fd);
      CHECK(std::fabs(an - fd) <= tol);
      ++checked;
    }
  CHECK(checked == (int)(field.size() * kParamSlots));
}

}  // namespace

TEST_CASE("analytic gradients match finite differences (color-only cotangent)") {
  Rng rng(4242);
  Camera cam;
  cam.k = Intrinsics::from_fov(32, 32, 0.9);
  GaussianField field = random_field(rng, 8, cam);
  const ImageF gc = random_image(rng, 32, 32, 3);
  check_all_grads(field, cam, smooth_settings(), gc, nullptr);
}

TEST_CASE("analytic gradients match finite differences (color and depth cotangents)") {
  Rng rng(977);
  Camera cam;
  cam.k = Intrinsics::from_fov(32, 32, 0.9);
  cam.pose = Pose::look_at({0.4, -0.3, -0.2}, {0.05, 0.1, 3.0});
  GaussianField field = random_field(rng, 8, cam);
  const ImageF gc = random_image(rng, 32, 32, 3);
  const ImageF gd = random_image(rng, 32, 32, 1);
  check_all_grads(field, cam, smooth_settings(), gc, &gd);
}

TEST_CASE("clamped alpha freezes the geometric gradient but not color or depth") {
  // 1x1 image fully covered by one splat pinned at the alpha clamp.
  Camera cam;
  cam.k = {50.0, 50.0, 0.0, 0.0, 1, 1};
  GaussianField field(0);
  Gaussian g;
  g.position = {0, 0, 2};
  g.log_scale = {std::log(0.5), std::log(0.5), std::log(0.5)};
  g.rotation = {1, 0, 0, 0};
  g.opacity_logit = 20.0;
  g.color = {0.3, 0.6, 0.9};
  field.add(g);

  ImageF gc(1, 1, 3);
  gc.at(0, 0, 0) = 1.0;
  ImageF gd(1, 1, 1);
  gd.at(0, 0, 0) = 2.0;

  FieldGradients grads;
  grads.assign_zero(1);
  render_backward(field, cam, {}, gc, &gd, &grads);

  // alpha = 0.99 exactly; only the direct color/depth paths stay live.
  CHECK(grads.color[0] == doctest::Approx(0.99).epsilon(1e-12));
  CHECK(grads.color[1] == 0.0);
  CHECK(grads.opacity_logit[0] == 0.0);
  CHECK(grads.log_scale[0] == 0.0);
  CHECK(grads.rotation[0] == 0.0);
  // depth cotangent: d(w * z)/d(z_cam) = w with the alpha path frozen.
  CHECK(grads.position[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(grads.position[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(grads.position[2] == doctest::Approx(2.0 * 0.99).epsilon(1e-12));
}

TEST_CASE("gradients accumulate across calls") {
  Rng rng(17);
  Camera cam;
  cam.k = Intrinsics::from_fov(24, 24, 0.9);
  GaussianField field = random_field(rng, 5, cam);
  const ImageF gc = random_image(rng, 24, 24, 3);

  FieldGradients once, twice;
  once.assign_zero(field.size());
  twice.assign_zero(field.size());
  render_backward(field, cam, {}, gc, nullptr, &once);
  render_backward(field, cam, {}, gc, nullptr, &twice);
  render_backward(field, cam, {}, gc, nullptr, &twice);

  for (size_t i = 0; i < once.position.size(); ++i)
    CHECK(twice.position[i] == doctest::Approx(2.0 * once.position[i]).epsilon(1e-12));
  for (size_t i = 0; i < once.color.size(); ++i)
    CHECK(twice.color[i] == doctest::Approx(2.0 * once.color[i]).epsilon(1e-12));
}

TEST_CASE("culled splats receive zero gradient") {
  Camera cam;
  cam.k = Intrinsics::from_fov(16, 16, 0.9);
  GaussianField field(0);
  Gaussian g;
  g.position = {0, 0, -3.0};  // behind the camera
  g.log_scale = {std::log(0.1), std::log(0.1), std::log(0.1)};
  g.rotation = {1, 0, 0, 0};
  g.color = {1, 1, 1};
  field.add(g);
  g.position = {0, 0, 3.0};
  field.add(g);

  ImageF gc(16, 16, 3);
  gc.fill(1.0);
  FieldGradients grads;
  grads.assign_zero(2);
  render_backward(field, cam, {}, gc, nullptr, &grads);

  for (int k = 0; k < 3; ++k) CHECK(grads.position[k] == 0.0);
  for (int k = 0; k < 4; ++k) CHECK(grads.rotation[k] == 0.0);
  CHECK(grads.opacity_logit[0] == 0.0);
  CHECK(grads.opacity_logit[1] != 0.0);
}

TEST_CASE("zero cotangents give zero gradients") {
  Rng rng(88);
  Camera cam;
  cam.k = Intrinsics::from_fov(24, 24, 0.9);
  GaussianField field = random_field(rng, 6, cam);
  ImageF gc(24, 24, 3);

  FieldGradients grads;
  grads.assign_zero(field.size());
  render_backward(field, cam, {}, gc, nullptr, &grads);
  for (double v : grads.position) CHECK(v == 0.0);
  for (double v : grads.opacity_logit) CHECK(v == 0.0);
  for (double v : grads.color) CHECK(v == 0.0);
}
