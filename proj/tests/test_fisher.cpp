// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gsmem/splat/fisher.hpp"
#include "gsmem/splat/rasterizer.hpp"
#include "test_util.hpp"

using namespace gsmem;
using namespace gsmem::testutil;

namespace {

// Brute-force information trace: sum over RGB pixels and every Gaussian
// parameter of the squared central-difference derivative of the rendered
// color. This is the definition the fast path must reproduce.
double fd_trace(GaussianField& field, const Camera& cam, const RasterSettings& rs,
                double h) {
  double total = 0.0;
  for (size_t i = 0; i < field.size(); ++i)
    for (int slot = 0; slot < kParamSlots; ++slot) {
      double* p = param_ptr(field, i, slot);
      const double save = *p;
      *p = save + h;
      const ImageF up = rasterize(field, cam, rs).color;
      *p = save - h;
      const ImageF dn = rasterize(field, cam, rs).color;
      *p = save;
      for (size_t k = 0; k < up.data.size(); ++k) {
        const double d = (up.data[k] - dn.data[k]) / (2 * h);
        total += d * d;
      }
    }
  return total;
}

}  // namespace

TEST_CASE("empty scenes carry no information") {
  GaussianField field(0);
  const Camera cam = identity_camera(32, 32, 40.0);
  CHECK(fisher_trace(field, cam) == 0.0);

  // A populated field viewed from the opposite direction is empty too.
  Rng rng(5);
  Camera away = cam;
  const GaussianField f2 = random_field(rng, 10, cam);
  away.pose = Pose::look_at({0, 0, 10}, {0, 0, 20});
  CHECK(fisher_trace(f2, away, {}) == 0.0);
}

TEST_CASE("information trace is nonnegative and deterministic") {
  Rng rng(66);
  const Camera cam = identity_camera(32, 32, 40.0);
  const GaussianField field = random_field(rng, 25, cam);
  const double a = fisher_trace(field, cam);
  CHECK(a > 0.0);
  CHECK(fisher_trace(field, cam) == a);
}

TEST_CASE("information trace is additive over a pixel partition") {
  Rng rng(13);
  const Camera cam = identity_camera(48, 48, 40.0);
  const GaussianField field = random_field(rng, 30, cam);

  const double full = fisher_trace(field, cam);
  double parts = 0.0;
  parts += fisher_trace(field, cam, {}, {0, 0, 20, 31});
  parts += fisher_trace(field, cam, {}, {20, 0, 48, 31});
  parts += fisher_trace(field, cam, {}, {0, 31, 20, 48});
  parts += fisher_trace(field, cam, {}, {20, 31, 48, 48});
  CHECK(std::fabs(full - parts) <= 1e-9 * std::max(1.0, full));

  // Rectangles clamp to the image, and empty ones contribute nothing.
  CHECK(fisher_trace(field, cam, {}, {10, 10, 10, 40}) == 0.0);
  CHECK(fisher_trace(field, cam, {}, {-5, -5, 48, 48}) == full);
}

TEST_CASE("fast information trace matches the finite-difference definition") {
  Rng rng(321);
  Camera cam;
  cam.k = Intrinsics::from_fov(16, 16, 0.9);
  GaussianField field = random_field(rng, 6, cam);
  const RasterSettings rs = smooth_settings();

  const double fast = fisher_trace(field, cam, rs);
  const double slow = fd_trace(field, cam, rs, 1e-4);
  CHECK(std::fabs(fast - slow) <= 1e-2 * std::max(std::fabs(fast), std::fabs(slow)));
}

TEST_CASE("information grows when a view gains content") {
  Rng rng(2024);
  const Camera cam = identity_camera(32, 32, 40.0);
  GaussianField field = random_field(rng, 10, cam);
  const double before = fisher_trace(field, cam);

  GaussianField more = random_field(rng, 10, cam);
  for (size_t i = 0; i < more.size(); ++i) field.add(more.get(i));
  // Not a theorem for arbitrary occlusion patterns, but with moderate
  // opacities extra visible structure adds squared-derivative mass.
  CHECK(fisher_trace(field, cam) > before);
}
