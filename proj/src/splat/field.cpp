// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/splat/field.hpp"

#include <algorithm>
#include <cassert>

namespace gsmem {

size_t GaussianField::add(const Gaussian& g) {
  assert(g.feature.empty() || (int)g.feature.size() == feature_dim_);
  const size_t i = size();
  position_.insert(position_.end(), {g.position.x, g.position.y, g.position.z});
  log_scale_.insert(log_scale_.end(), {g.log_scale.x, g.log_scale.y, g.log_scale.z});
  const Vec4 q = g.rotation.normalized();
  rotation_.insert(rotation_.end(), {q.w, q.x, q.y, q.z});
  opacity_logit_.push_back(g.opacity_logit);
  color_.insert(color_.end(), {g.color.x, g.color.y, g.color.z});
  if (g.feature.empty())
    feature_.insert(feature_.end(), feature_dim_, 0.0);
  else
    feature_.insert(feature_.end(), g.feature.begin(), g.feature.end());
  feature_weight_.push_back(g.feature_weight);
  return i;
}

Gaussian GaussianField::get(size_t i) const {
  Gaussian g;
  g.position = position(i);
  g.log_scale = log_scale(i);
  g.rotation = rotation(i);
  g.opacity_logit = opacity_logit_[i];
  g.color = color(i);
  g.feature.assign(feature(i), feature(i) + feature_dim_);
  g.feature_weight = feature_weight_[i];
  return g;
}

void GaussianField::set_rotation(size_t i, const Vec4& q) {
  const Vec4 n = q.normalized();
  rotation_[4 * i] = n.w;
  rotation_[4 * i + 1] = n.x;
  rotation_[4 * i + 2] = n.y;
  rotation_[4 * i + 3] = n.z;
}

Mat3 GaussianField::covariance(size_t i) const {
  const Mat3 r = quat_to_mat(rotation(i));
  const Vec3 s = log_scale(i);
  const Mat3 m = r * Mat3::diag(std::exp(s.x), std::exp(s.y), std::exp(s.z));
  return m * m.transposed();
}

double GaussianField::extent() const {
  if (size() == 0) return 0.0;
  Vec3 lo = position(0), hi = position(0);
  for (size_t i = 1; i < size(); ++i) {
    const Vec3 p = position(i);
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  return (hi - lo).norm();
}

}  // namespace gsmem
