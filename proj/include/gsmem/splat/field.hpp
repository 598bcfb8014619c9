// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "gsmem/core/math.hpp"

namespace gsmem {

// One Gaussian primitive, the unit of the spatial memory. Covariance is
// parameterized as R(rotation) * diag(exp(log_scale))^2 * R^T, which keeps it
// symmetric positive definite under unconstrained updates. Opacity lives in
// logit space for the same reason.
struct Gaussian {
  Vec3 position;
  Vec3 log_scale;
  Vec4 rotation;  // unit quaternion (w, x, y, z)
  double opacity_logit = 0.0;
  Vec3 color;
  std::vector<double> feature;   // empty means zero vector
  double feature_weight = 0.0;   // accumulated blending-weight mass
};

// Structure-of-arrays Gaussian store.
class GaussianField {
 public:
  explicit GaussianField(int feature_dim = 32) : feature_dim_(feature_dim) {}

  size_t size() const { return opacity_logit_.size(); }
  int feature_dim() const { return feature_dim_; }

  size_t add(const Gaussian& g);
  Gaussian get(size_t i) const;

  Vec3 position(size_t i) const { return load3(position_, i); }
  Vec3 log_scale(size_t i) const { return load3(log_scale_, i); }
  Vec4 rotation(size_t i) const {
    return {rotation_[4 * i], rotation_[4 * i + 1], rotation_[4 * i + 2],
            rotation_[4 * i + 3]};
  }
  double opacity_logit(size_t i) const { return opacity_logit_[i]; }
  double opacity(size_t i) const { return sigmoid(opacity_logit_[i]); }
  Vec3 color(size_t i) const { return load3(color_, i); }
  const double* feature(size_t i) const { return feature_.data() + (size_t)feature_dim_ * i; }
  double* feature(size_t i) { return feature_.data() + (size_t)feature_dim_ * i; }
  double feature_weight(size_t i) const { return feature_weight_[i]; }

  void set_position(size_t i, const Vec3& v) { store3(position_, i, v); }
  void set_log_scale(size_t i, const Vec3& v) { store3(log_scale_, i, v); }
  void set_rotation(size_t i, const Vec4& q);
  void set_opacity_logit(size_t i, double v) { opacity_logit_[i] = v; }
  void set_color(size_t i, const Vec3& v) { store3(color_, i, v); }
  void set_feature_weight(size_t i, double w) { feature_weight_[i] = w; }

  // 3x3 world-space covariance R S S^T R^T.
  Mat3 covariance(size_t i) const;

  // Diagonal of the axis-aligned bounding box of all positions; 0 when empty.
  double extent() const;

  std::vector<double>& positions() { return position_; }
  std::vector<double>& log_scales() { return log_scale_; }
  std::vector<double>& rotations() { return rotation_; }
  std::vector<double>& opacity_logits() { return opacity_logit_; }
  std::vector<double>& colors() { return color_; }
  std::vector<double>& features() { return feature_; }
  std::vector<double>& feature_weights() { return feature_weight_; }
  const std::vector<double>& positions() const { return position_; }
  const std::vector<double>& log_scales() const { return log_scale_; }
  const std::vector<double>& rotations() const { return rotation_; }
  const std::vector<double>& opacity_logits() const { return opacity_logit_; }
  const std::vector<double>& colors() const { return color_; }
  const std::vector<double>& features() const { return feature_; }
  const std::vector<double>& feature_weights() const { return feature_weight_; }

 private:
  static Vec3 load3(const std::vector<double>& v, size_t i) {
    return {v[3 * i], v[3 * i + 1], v[3 * i + 2]};
  }
  static void store3(std::vector<double>& v, size_t i, const Vec3& p) {
    v[3 * i] = p.x;
    v[3 * i + 1] = p.y;
    v[3 * i + 2] = p.z;
  }

  int feature_dim_;
  std::vector<double> position_;
  std::vector<double> log_scale_;
  std::vector<double> rotation_;
  std::vector<double> opacity_logit_;
  std::vector<double> color_;
  std::vector<double> feature_;
  std::vector<double> feature_weight_;
};

}  // namespace gsmem
