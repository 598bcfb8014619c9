// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsmem/core/math.hpp"

namespace gsmem {

// Pinhole intrinsics. Pixel (ix, iy) samples the ray through (ix, iy) exactly,
// i.e. a point with camera coordinates (x, y, z) lands on pixel
// (fx * x / z + cx, fy * y / z + cy).
struct Intrinsics {
  double fx = 0.0, fy = 0.0, cx = 0.0, cy = 0.0;
  int width = 0, height = 0;

  static Intrinsics from_fov(int w, int h, double fov_x_rad) {
    Intrinsics k;
    k.width = w;
    k.height = h;
    k.fx = 0.5 * w / std::tan(0.5 * fov_x_rad);
    k.fy = k.fx;
    k.cx = 0.5 * (w - 1);
    k.cy = 0.5 * (h - 1);
    return k;
  }
};

// World-to-camera rigid transform. Camera axes: +x right, +y down (image
// rows), +z forward.
struct Pose {
  Mat3 r_cw;   // world -> camera rotation
  Vec3 t_cw;   // p_cam = r_cw * p_world + t_cw

  Vec3 to_camera(const Vec3& p_world) const { return r_cw * p_world + t_cw; }
  Vec3 to_world(const Vec3& p_cam) const { return r_cw.transposed() * (p_cam - t_cw); }
  Vec3 position() const { return r_cw.transposed() * (-t_cw); }
  Vec3 forward() const { return {r_cw(2, 0), r_cw(2, 1), r_cw(2, 2)}; }

  static Pose look_at(const Vec3& eye, const Vec3& target, const Vec3& up = {0, 0, 1}) {
    Vec3 z = (target - eye).normalized();
    Vec3 x = z.cross(up);
    if (x.norm() < 1e-12) x = z.cross({0, 1, 0});  // looking straight along `up`
    x = x.normalized();
    Vec3 y = z.cross(x);
    Pose p;
    p.r_cw = Mat3::from_rows(x, y, z);
    p.t_cw = p.r_cw * (-eye);
    return p;
  }
};

struct Camera {
  Intrinsics k;
  Pose pose;

  // Camera-space ray direction of a pixel, scaled so dir.z == 1. A point at
  // camera depth t along the ray is eye + t * ray_world(ix, iy).
  Vec3 ray_cam(double ix, double iy) const {
    return {(ix - k.cx) / k.fx, (iy - k.cy) / k.fy, 1.0};
  }
  Vec3 ray_world(double ix, double iy) const {
    return pose.r_cw.transposed() * ray_cam(ix, iy);
  }
  Vec3 backproject(double ix, double iy, double depth) const {
    return pose.to_world(ray_cam(ix, iy) * depth);
  }
  // Projects a world point; returns false when it is at or behind the camera.
  bool project(const Vec3& p_world, Vec2* px, double* depth = nullptr) const {
    Vec3 pc = pose.to_camera(p_world);
    if (pc.z <= 0.0) return false;
    px->x = k.fx * pc.x / pc.z + k.cx;
    px->y = k.fy * pc.y / pc.z + k.cy;
    if (depth) *depth = pc.z;
    return true;
  }
};

}  // namespace gsmem
