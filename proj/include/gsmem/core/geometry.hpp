// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsmem/core/math.hpp"

namespace gsmem {

inline constexpr double kAabbInf = std::numeric_limits<double>::infinity();

// Axis-aligned box, min <= max componentwise. Default-constructed boxes are
// empty: they contain nothing and act as the identity element for expand()
// and united().
struct Aabb {
  Vec3 min{kAabbInf, kAabbInf, kAabbInf};
  Vec3 max{-kAabbInf, -kAabbInf, -kAabbInf};

  static Aabb empty() { return {}; }
  bool is_empty() const { return min.x > max.x || min.y > max.y || min.z > max.z; }

  Vec3 centroid() const { return (min + max) * 0.5; }
  Vec3 size() const { return max - min; }
  double diagonal() const { return is_empty() ? 0.0 : size().norm(); }
  double volume() const {
    if (is_empty()) return 0.0;
    const Vec3 s = size();
    return s.x * s.y * s.z;
  }

  bool contains(const Vec3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
           p.z <= max.z;
  }

  void expand(const Vec3& p) {
    min = {std::min(min.x, p.x), std::min(min.y, p.y), std::min(min.z, p.z)};
    max = {std::max(max.x, p.x), std::max(max.y, p.y), std::max(max.z, p.z)};
  }

  // Grows every face outward by `m` (or shrinks for negative m).
  Aabb padded(double m) const {
    return {{min.x - m, min.y - m, min.z - m}, {max.x + m, max.y + m, max.z + m}};
  }

  // Pads only the degenerate sides so that every side is at least `s` long.
  Aabb with_min_side(double s) const {
    Aabb r = *this;
    auto fix = [s](double& lo, double& hi) {
      if (hi - lo < s) {
        const double c = 0.5 * (lo + hi);
        lo = c - 0.5 * s;
        hi = c + 0.5 * s;
      }
    };
    fix(r.min.x, r.max.x);
    fix(r.min.y, r.max.y);
    fix(r.min.z, r.max.z);
    return r;
  }

  static Aabb united(const Aabb& a, const Aabb& b) {
    if (a.is_empty()) return b;
    if (b.is_empty()) return a;
    return {{std::min(a.min.x, b.min.x), std::min(a.min.y, b.min.y), std::min(a.min.z, b.min.z)},
            {std::max(a.max.x, b.max.x), std::max(a.max.y, b.max.y), std::max(a.max.z, b.max.z)}};
  }

  static Aabb intersected(const Aabb& a, const Aabb& b) {
    return {{std::max(a.min.x, b.min.x), std::max(a.min.y, b.min.y), std::max(a.min.z, b.min.z)},
            {std::min(a.max.x, b.max.x), std::min(a.max.y, b.max.y), std::min(a.max.z, b.max.z)}};
  }
};

inline double aabb_iou(const Aabb& a, const Aabb& b) {
  const Aabb i = Aabb::intersected(a, b);
  if (i.is_empty()) return 0.0;
  const double vi = i.volume();
  const double vu = a.volume() + b.volume() - vi;
  return vu > 0.0 ? vi / vu : 0.0;
}

}  // namespace gsmem
