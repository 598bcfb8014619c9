// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gsmem/core/camera.hpp"
#include "gsmem/core/math.hpp"
#include "gsmem/core/rng.hpp"

using namespace gsmem;

TEST_CASE("quat_to_mat maps known rotations") {
  const Mat3 id = quat_to_mat({1, 0, 0, 0});
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(id(r, c) == doctest::Approx(r == c ? 1.0 : 0.0));

  // 90 degrees about +z takes +x to +y.
  const double s = std::sqrt(0.5);
  const Mat3 rz = quat_to_mat({s, 0, 0, s});
  const Vec3 v = rz * Vec3{1, 0, 0};
  CHECK(v.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v.y == doctest::Approx(1.0));
  CHECK(v.z == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("quat_to_mat gives proper rotations for random unit quaternions") {
  Rng rng(7);
  for (int it = 0; it < 50; ++it) {
    Vec4 q{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1),
           uniform(rng, -1, 1)};
    q = q.normalized();
    const Mat3 r = quat_to_mat(q);
    const Mat3 rrt = r * r.transposed();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(rrt(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    const Vec3 r0{r(0, 0), r(0, 1), r(0, 2)};
    const Vec3 r1{r(1, 0), r(1, 1), r(1, 2)};
    const Vec3 r2{r(2, 0), r(2, 1), r(2, 2)};
    CHECK(r0.cross(r1).dot(r2) == doctest::Approx(1.0));  // det = +1
  }
}

TEST_CASE("look_at produces right-down-forward camera axes") {
  const Vec3 eye{2, -3, 1.5};
  const Vec3 target{0, 0, 1.5};
  const Pose p = Pose::look_at(eye, target);

  const Vec3 fwd = p.forward();
  const Vec3 expect = (target - eye).normalized();
  CHECK(fwd.x == doctest::Approx(expect.x));
  CHECK(fwd.y == doctest::Approx(expect.y));
  CHECK(fwd.z == doctest::Approx(expect.z));

  // The target sits straight ahead at the eye-target distance.
  const Vec3 tc = p.to_camera(target);
  CHECK(tc.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(tc.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(tc.z == doctest::Approx((target - eye).norm()));

  // +y points down for a level view with z-up.
  const Vec3 ycam{p.r_cw(1, 0), p.r_cw(1, 1), p.r_cw(1, 2)};
  CHECK(ycam.z == doctest::Approx(-1.0));

  const Vec3 pos = p.position();
  CHECK(pos.x == doctest::Approx(eye.x));
  CHECK(pos.y == doctest::Approx(eye.y));
  CHECK(pos.z == doctest::Approx(eye.z));
}

TEST_CASE("camera projection and backprojection round-trip") {
  Camera cam;
  cam.k = Intrinsics::from_fov(96, 72, 1.0);
  cam.pose = Pose::look_at({1, 2, 3}, {-2, 4, 2.5});

  CHECK(cam.k.cx == doctest::Approx(47.5));
  CHECK(cam.k.fx == doctest::Approx(0.5 * 96 / std::tan(0.5)));

  Rng rng(11);
  for (int it = 0; it < 30; ++it) {
    const double px = uniform(rng, 0, 95);
    const double py = uniform(rng, 0, 71);
    const double depth = uniform(rng, 0.5, 8.0);
    const Vec3 pw = cam.backproject(px, py, depth);
    Vec2 back;
    double d2 = 0;
    REQUIRE(cam.project(pw, &back, &d2));
    CHECK(back.x == doctest::Approx(px).epsilon(1e-10));
    CHECK(back.y == doctest::Approx(py).epsilon(1e-10));
    CHECK(d2 == doctest::Approx(depth).epsilon(1e-10));
  }

  // Points behind the camera do not project.
  Vec2 ignored;
  CHECK_FALSE(cam.project(cam.pose.position() - cam.pose.forward(), &ignored));
}

TEST_CASE("ray_cam has unit forward component") {
  Camera cam;
  cam.k = Intrinsics::from_fov(64, 64, 0.9);
  const Vec3 r = cam.ray_cam(10.25, 40.5);
  CHECK(r.z == 1.0);
  CHECK(r.x == doctest::Approx((10.25 - cam.k.cx) / cam.k.fx));
}

TEST_CASE("sigmoid and logit invert each other and stay stable") {
  for (double p : {1e-9, 0.01, 0.25, 0.5, 0.9, 1.0 - 1e-9})
    CHECK(sigmoid(logit(p)) == doctest::Approx(p).epsilon(1e-12));
  for (double x : {-700.0, -30.0, -1.0, 0.0, 2.5, 30.0, 700.0}) {
    const double s = sigmoid(x);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    CHECK(sigmoid(-x) == doctest::Approx(1.0 - s).epsilon(1e-12));
  }
}

TEST_CASE("Mat3 algebra") {
  Rng rng(3);
  Mat3 a, b;
  for (int i = 0; i < 9; ++i) {
    a.m[i] = uniform(rng, -2, 2);
    b.m[i] = uniform(rng, -2, 2);
  }
  const Mat3 ab = a * b;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += a(r, k) * b(k, c);
      CHECK(ab(r, c) == doctest::Approx(s).epsilon(1e-13));
    }
  const Mat3 at = a.transposed();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(at(r, c) == a(c, r));

  const Vec3 v{1.5, -2.0, 0.25};
  const Vec3 av = a * v;
  CHECK(av.x == doctest::Approx(a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z));
}

TEST_CASE("seed derivation is reproducible and decorrelated") {
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a("") == 14695981039346656037ull);
  CHECK(mix_seed(42, 0) == mix_seed(42, 0));
  CHECK(mix_seed(42, 0) != mix_seed(42, 1));
  CHECK(mix_seed(42, 0) != mix_seed(43, 0));
}
