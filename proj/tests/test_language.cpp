// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <functional>

#include "doctest.h"
#include "gsmem/map/language_field.hpp"
#include "gsmem/splat/rasterizer.hpp"
#include "test_util.hpp"

using namespace gsmem;
using namespace gsmem::testutil;

namespace {

// Provider whose feature map is produced by a per-frame callback.
class CallbackProvider : public EmbeddingProvider {
 public:
  CallbackProvider(int dim, std::function<FeatureMap(const Keyframe&)> fn)
      : dim_(dim), fn_(std::move(fn)) {}
  int dim() const override { return dim_; }
  FeatureMap embed_image(const Keyframe& frame) const override { return fn_(frame); }
  std::vector<double> embed_text(const std::string&) const override {
    return std::vector<double>(dim_, 0.0);
  }

 private:
  int dim_;
  std::function<FeatureMap(const Keyframe&)> fn_;
};

FeatureMap constant_map(const Camera& cam, const std::vector<double>& f) {
  FeatureMap m(cam.k.width, cam.k.height, (int)f.size());
  for (int y = 0; y < cam.k.height; ++y)
    for (int x = 0; x < cam.k.width; ++x)
      std::copy(f.begin(), f.end(), m.pixel(y, x));
  return m;
}

Keyframe posed_frame(const Camera& cam) {
  Keyframe kf;
  kf.camera = cam;
  kf.color = ImageF(cam.k.width, cam.k.height, 3);
  kf.depth = ImageF(cam.k.width, cam.k.height, 1);
  return kf;
}

std::vector<double> unit(int dim, int axis) {
  std::vector<double> v(dim, 0.0);
  v[axis] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("constant pixel features transfer exactly onto every touched Gaussian") {
  Rng rng(11);
  const Camera cam = identity_camera();
  const int dim = 8;
  GaussianField field = random_field(rng, 10, cam, dim);
  // Clear the random seed features so aggregation starts from a zero state.
  std::fill(field.features().begin(), field.features().end(), 0.0);
  std::fill(field.feature_weights().begin(), field.feature_weights().end(), 0.0);

  const std::vector<double> u = unit(dim, 3);
  const CallbackProvider provider(dim, [&](const Keyframe& kf) {
    return constant_map(kf.camera, u);
  });
  const Keyframe kf = posed_frame(cam);
  aggregate_features(field, {&kf}, provider);

  // Independent expectation for the accumulated weights: the rasterizer's own
  // per-pixel contributions, summed per Gaussian in the same pixel order.
  RenderChannels ch;
  ch.contributions = true;
  const RenderOutput out = rasterize(field, cam, {}, ch);
  std::vector<double> expected_w(field.size(), 0.0);
  for (const auto& px : out.contributions)
    for (const Contribution& cb : px) expected_w[cb.id] += cb.w;

  for (size_t i = 0; i < field.size(); ++i) {
    CHECK(field.feature_weight(i) == expected_w[i]);  // bit-for-bit shared weights
    if (expected_w[i] > 0.0) {
      for (int c = 0; c < dim; ++c)
        CHECK(field.feature(i)[c] == doctest::Approx(u[c]).epsilon(1e-12));
    } else {
      for (int c = 0; c < dim; ++c) CHECK(field.feature(i)[c] == 0.0);
    }
  }
}

TEST_CASE("re-aggregating identical frames is a fixed point that doubles the weights") {
  Rng rng(12);
  const Camera cam = identity_camera();
  const int dim = 6;
  GaussianField field = random_field(rng, 8, cam, dim);
  std::fill(field.features().begin(), field.features().end(), 0.0);
  std::fill(field.feature_weights().begin(), field.feature_weights().end(), 0.0);

  const std::vector<double> u = unit(dim, 1);
  const CallbackProvider provider(dim, [&](const Keyframe& kf) {
    return constant_map(kf.camera, u);
  });
  const Keyframe kf = posed_frame(cam);

  aggregate_features(field, {&kf}, provider);
  const std::vector<double> w1 = field.feature_weights();
  const std::vector<double> f1 = field.features();

  aggregate_features(field, {&kf}, provider);
  for (size_t i = 0; i < field.size(); ++i) {
    CHECK(field.feature_weights()[i] == 2.0 * w1[i]);
    for (int c = 0; c < dim; ++c)
      CHECK(field.features()[dim * i + c] ==
            doctest::Approx(f1[dim * i + c]).epsilon(1e-12));
  }
}

TEST_CASE("two-view aggregation is the weight-proportional average") {
  // One isotropic splat dead ahead; four pixels symmetric about the image
  // center carry identical blending weights w. Giving feature u to one pixel
  // and v to three others must land on (u + 3v) / 4 before normalization.
  const Camera cam = identity_camera(64, 64, 50.0);
  const int dim = 4;
  GaussianField field(dim);
  Gaussian g;
  g.position = {0.0, 0.0, 2.0};  // projects to (cx, cy) = (32, 32)
  g.log_scale = {std::log(0.3), std::log(0.3), std::log(0.3)};
  g.rotation = {1, 0, 0, 0};
  g.opacity_logit = 0.5;
  g.color = {1, 1, 1};
  field.add(g);

  const std::vector<double> u = unit(dim, 0);
  const std::vector<double> v = unit(dim, 2);
  const CallbackProvider provider(dim, [&](const Keyframe& kf) {
    FeatureMap m(64, 64, dim);
    if (kf.id == 1) {
      std::copy(u.begin(), u.end(), m.pixel(32, 30));
    } else {
      std::copy(v.begin(), v.end(), m.pixel(32, 34));
      std::copy(v.begin(), v.end(), m.pixel(30, 32));
      std::copy(v.begin(), v.end(), m.pixel(34, 32));
    }
    return m;
  });

  Keyframe a = posed_frame(cam);
  a.id = 1;
  Keyframe b = posed_frame(cam);
  b.id = 2;

  AggregationConfig cfg;
  cfg.renormalize = false;
  aggregate_features(field, {&a, &b}, provider, cfg);

  const double* f = field.feature(0);
  CHECK(f[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(f[1] == doctest::Approx(0.0));
  CHECK(f[2] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(f[3] == doctest::Approx(0.0));

  // With renormalization the direction is kept and the norm becomes one.
  GaussianField field2(dim);
  field2.add(g);
  aggregate_features(field2, {&a, &b}, provider);
  const double* f2 = field2.feature(0);
  const double norm = std::sqrt(f2[0] * f2[0] + f2[1] * f2[1] + f2[2] * f2[2] + f2[3] * f2[3]);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f2[2] / f2[0] == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("updates stay in the convex hull of old and observed features") {
  Rng rng(13);
  const Camera cam = identity_camera();
  const int dim = 5;
  GaussianField field = random_field(rng, 12, cam, dim);
  // Random (not unit) starting features with positive weights.
  for (size_t i = 0; i < field.size(); ++i) field.set_feature_weight(i, uniform(rng, 0.1, 3.0));
  const std::vector<double> before = field.features();

  std::vector<double> lo(dim, 1e30), hi(dim, -1e30);
  std::vector<std::vector<double>> frame_features;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> f(dim);
    for (double& x : f) x = uniform(rng, -1.0, 1.0);
    frame_features.push_back(f);
    for (int c = 0; c < dim; ++c) {
      lo[c] = std::min(lo[c], f[c]);
      hi[c] = std::max(hi[c], f[c]);
    }
  }

  const CallbackProvider provider(dim, [&](const Keyframe& kf) {
    return constant_map(kf.camera, frame_features[kf.id % 3]);
  });
  std::vector<Keyframe> frames;
  for (int k = 0; k < 3; ++k) {
    Keyframe kf = posed_frame(cam);
    kf.id = k;
    frames.push_back(std::move(kf));
  }

  AggregationConfig cfg;
  cfg.renormalize = false;
  const std::vector<double> w_before = field.feature_weights();
  aggregate_features(field, {&frames[0], &frames[1], &frames[2]}, provider, cfg);

  for (size_t i = 0; i < field.size(); ++i) {
    CHECK(field.feature_weight(i) >= w_before[i]);  // weights never decrease
    if (field.feature_weight(i) == w_before[i]) continue;
    for (int c = 0; c < dim; ++c) {
      const double prev = before[dim * i + c];
      const double cur = field.features()[dim * i + c];
      CHECK(cur >= std::min(lo[c], prev) - 1e-12);
      CHECK(cur <= std::max(hi[c], prev) + 1e-12);
    }
  }
}

TEST_CASE("zero-feature pixels and invisible Gaussians contribute nothing") {
  const Camera cam = identity_camera();
  const int dim = 3;
  GaussianField field(dim);
  Gaussian g;
  g.position = {0.0, 0.0, -3.0};  // behind the camera: never rendered
  g.log_scale = {std::log(0.2), std::log(0.2), std::log(0.2)};
  g.rotation = {1, 0, 0, 0};
  g.opacity_logit = 1.0;
  g.color = {1, 1, 1};
  field.add(g);
  g.position = {0.0, 0.0, 2.0};
  field.add(g);

  // All-zero feature map: no pixel carries evidence.
  const CallbackProvider zeros(dim, [&](const Keyframe& kf) {
    return FeatureMap(kf.camera.k.width, kf.camera.k.height, dim);
  });
  const Keyframe kf = posed_frame(cam);
  aggregate_features(field, {&kf}, zeros);
  CHECK(field.feature_weight(0) == 0.0);
  CHECK(field.feature_weight(1) == 0.0);

  const CallbackProvider ones(dim, [&](const Keyframe& frame) {
    return constant_map(frame.camera, unit(dim, 0));
  });
  aggregate_features(field, {&kf}, ones);
  CHECK(field.feature_weight(0) == 0.0);  // invisible: untouched
  CHECK(field.feature_weight(1) > 0.0);

  const auto sims = query_similarity(field, unit(dim, 0));
  CHECK(sims[0] == -1.0);
  CHECK(sims[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("similarity is the cosine against stored unit features") {
  const int dim = 4;
  GaussianField field(dim);
  Gaussian g;
  g.position = {0, 0, 2};
  g.log_scale = {0, 0, 0};
  g.rotation = {1, 0, 0, 0};
  g.feature = unit(dim, 0);
  g.feature_weight = 1.0;
  field.add(g);
  g.feature = unit(dim, 1);
  field.add(g);
  g.feature = std::vector<double>{-1.0, 0.0, 0.0, 0.0};
  field.add(g);
  g.feature.clear();
  g.feature_weight = 0.0;
  field.add(g);

  const auto sims = query_similarity(field, unit(dim, 0));
  CHECK(sims[0] == doctest::Approx(1.0));
  CHECK(sims[1] == doctest::Approx(0.0));
  CHECK(sims[2] == doctest::Approx(-1.0));
  CHECK(sims[3] == -1.0);  // sentinel for the never-observed Gaussian
}

TEST_CASE("dimension mismatches are hard errors") {
  const Camera cam = identity_camera();
  GaussianField field(8);
  const CallbackProvider provider(4, [&](const Keyframe& kf) {
    return FeatureMap(kf.camera.k.width, kf.camera.k.height, 4);
  });
  const Keyframe kf = posed_frame(cam);
  CHECK_THROWS_AS(aggregate_features(field, {&kf}, provider), std::invalid_argument);
  CHECK_THROWS_AS(query_similarity(field, std::vector<double>(4, 0.0)),
                  std::invalid_argument);
}
