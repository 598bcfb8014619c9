// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

namespace gsmem {

struct Vec2 {
  double x = 0.0, y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::sqrt(x * x + y * y); }
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{};
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

struct Vec4 {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  Vec4() = default;
  Vec4(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

  double dot(const Vec4& o) const { return w * o.w + x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec4 normalized() const {
    double n = norm();
    return n > 0.0 ? Vec4{w / n, x / n, y / n, z / n} : Vec4{1.0, 0.0, 0.0, 0.0};
  }
};

// Row-major 3x3 matrix.
struct Mat3 {
  double m[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return {}; }
  static Mat3 zero() {
    Mat3 r;
    for (double& v : r.m) v = 0.0;
    return r;
  }
  static Mat3 diag(double a, double b, double c) {
    Mat3 r = zero();
    r.m[0] = a;
    r.m[4] = b;
    r.m[8] = c;
    return r;
  }
  static Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
    Mat3 r;
    r.m[0] = r0.x; r.m[1] = r0.y; r.m[2] = r0.z;
    r.m[3] = r1.x; r.m[4] = r1.y; r.m[5] = r1.z;
    r.m[6] = r2.x; r.m[7] = r2.y; r.m[8] = r2.z;
    return r;
  }

  double operator()(int r, int c) const { return m[3 * r + c]; }
  double& operator()(int r, int c) { return m[3 * r + c]; }

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r = zero();
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) {
        double a = m[3 * i + k];
        for (int j = 0; j < 3; ++j) r.m[3 * i + j] += a * o.m[3 * k + j];
      }
    return r;
  }
  Mat3 operator+(const Mat3& o) const {
    Mat3 r = zero();
    for (int i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
    return r;
  }
  Mat3 operator*(double s) const {
    Mat3 r = zero();
    for (int i = 0; i < 9; ++i) r.m[i] = m[i] * s;
    return r;
  }
  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[3 * i + j] = m[3 * j + i];
    return r;
  }
};

// Unit quaternion (w, x, y, z) to rotation matrix. The caller is expected to
// pass a normalized quaternion; this does not renormalize.
inline Mat3 quat_to_mat(const Vec4& q) {
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  Mat3 r;
  r.m[0] = 1.0 - 2.0 * (y * y + z * z);
  r.m[1] = 2.0 * (x * y - w * z);
  r.m[2] = 2.0 * (x * z + w * y);
  r.m[3] = 2.0 * (x * y + w * z);
  r.m[4] = 1.0 - 2.0 * (x * x + z * z);
  r.m[5] = 2.0 * (y * z - w * x);
  r.m[6] = 2.0 * (x * z - w * y);
  r.m[7] = 2.0 * (y * z + w * x);
  r.m[8] = 1.0 - 2.0 * (x * x + y * y);
  return r;
}

inline double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

inline double sigmoid(double x) {
  if (x >= 0.0) {
    double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace gsmem
