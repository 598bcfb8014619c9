// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Screen-space-to-parameter gradient chain, shared by the rasterizer backward
// pass and the Fisher-information pass. Cotangents of symmetric matrices use
// the independent-slot convention: scalar parameters (a, b, c) of
// [[a, b], [b, c]] map to the matrix cotangent [[da, db/2], [db/2, dc]].

#include <cmath>

#include "gsmem/core/camera.hpp"
#include "gsmem/core/math.hpp"
#include "gsmem/kernels/kernels.hpp"
#include "gsmem/splat/field.hpp"
#include "gsmem/splat/projection.hpp"

namespace gsmem::detail {

struct ChainContext {
  Vec3 pc;                 // camera-space mean
  double tx, ty;           // clamped view-plane coordinates, times z
  bool clamped_x, clamped_y;
  double slim_x, slim_y;   // signed clamp bound (tx = slim_x * z when clamped)
  Mat3 r_cw;
  Mat3 rot;                // rotation of the normalized quaternion
  Vec4 qhat;
  double qnorm;
  Vec3 es;                 // exp(log_scale)
  Mat3 m3;                 // rot * diag(es)
  Mat3 v;                  // camera-space 3x3 covariance
  double j00, j02, j11, j12;
  double fx, fy;
  double ia, ib, ic;       // conic (inverse regularized cov2d)
  double sig;              // opacity sigmoid
};

inline ChainContext make_chain_context(const GaussianField& field, size_t i,
                                       const Camera& cam, const RasterSettings& rs) {
  ChainContext c;
  c.pc = cam.pose.to_camera(field.position(i));
  c.fx = cam.k.fx;
  c.fy = cam.k.fy;
  const double z = c.pc.z;
  const double limx = 1.3 * (0.5 * cam.k.width) / c.fx;
  const double limy = 1.3 * (0.5 * cam.k.height) / c.fy;
  const double rx = c.pc.x / z, ry = c.pc.y / z;
  c.clamped_x = rx < -limx || rx > limx;
  c.clamped_y = ry < -limy || ry > limy;
  c.slim_x = rx < 0.0 ? -limx : limx;
  c.slim_y = ry < 0.0 ? -limy : limy;
  c.tx = clamp(rx, -limx, limx) * z;
  c.ty = clamp(ry, -limy, limy) * z;
  c.j00 = c.fx / z;
  c.j02 = -c.fx * c.tx / (z * z);
  c.j11 = c.fy / z;
  c.j12 = -c.fy * c.ty / (z * z);
  c.r_cw = cam.pose.r_cw;
  const Vec4 q = field.rotation(i);
  c.qnorm = q.norm();
  c.qhat = q.normalized();
  c.rot = quat_to_mat(c.qhat);
  const Vec3 s = field.log_scale(i);
  c.es = {std::exp(s.x), std::exp(s.y), std::exp(s.z)};
  c.m3 = c.rot * Mat3::diag(c.es.x, c.es.y, c.es.z);
  const Mat3 sigma = c.m3 * c.m3.transposed();
  c.v = c.r_cw * sigma * c.r_cw.transposed();

  const double c2a = c.j00 * (c.j00 * c.v(0, 0) + c.j02 * c.v(0, 2)) +
                     c.j02 * (c.j00 * c.v(0, 2) + c.j02 * c.v(2, 2));
  const double c2b = c.j00 * (c.j11 * c.v(0, 1) + c.j12 * c.v(0, 2)) +
                     c.j02 * (c.j11 * c.v(1, 2) + c.j12 * c.v(2, 2));
  const double c2c = c.j11 * (c.j11 * c.v(1, 1) + c.j12 * c.v(1, 2)) +
                     c.j12 * (c.j11 * c.v(1, 2) + c.j12 * c.v(2, 2));
  const double ma = c2a + rs.cov_reg, mb = c2b, mc = c2c + rs.cov_reg;
  const double det = ma * mc - mb * mb;
  c.ia = mc / det;
  c.ib = -mb / det;
  c.ic = ma / det;

  c.sig = field.opacity(i);
  return c;
}

struct ParamGrad {
  Vec3 position;
  Vec3 log_scale;
  Vec4 rotation = {0, 0, 0, 0};
  double opacity_logit = 0.0;
};

// Pulls screen-space cotangents (mean2d, conic, opacity, rendered depth) back
// to the Gaussian parameters. Color is a direct copy and handled by callers.
inline ParamGrad chain_to_params(const ChainContext& c, const kernels::SplatGrad2d& g) {
  ParamGrad out;
  const double z = c.pc.z;
  const double z2 = z * z;

  out.opacity_logit = g.sigma * c.sig * (1.0 - c.sig);

  // conic -> regularized cov2d: conic = M^-1, so dM = -C Gc C.
  const double ga = g.conic_a, gb = 0.5 * g.conic_b, gc = g.conic_c;
  const double t00 = c.ia * ga + c.ib * gb, t01 = c.ia * gb + c.ib * gc;
  const double t10 = c.ib * ga + c.ic * gb, t11 = c.ib * gb + c.ic * gc;
  const double dm00 = -(t00 * c.ia + t01 * c.ib);
  const double dm01 = -(t00 * c.ib + t01 * c.ic);
  const double dm11 = -(t10 * c.ib + t11 * c.ic);

  // dV = J^T dM J (3x3 symmetric).
  const double j00 = c.j00, j02 = c.j02, j11 = c.j11, j12 = c.j12;
  Mat3 dv = Mat3::zero();
  dv(0, 0) = j00 * dm00 * j00;
  dv(0, 1) = j00 * dm01 * j11;
  dv(0, 2) = j00 * (dm00 * j02 + dm01 * j12);
  dv(1, 1) = j11 * dm11 * j11;
  dv(1, 2) = j11 * (dm01 * j02 + dm11 * j12);
  dv(2, 2) = j02 * (dm00 * j02 + dm01 * j12) + j12 * (dm01 * j02 + dm11 * j12);
  dv(1, 0) = dv(0, 1);
  dv(2, 0) = dv(0, 2);
  dv(2, 1) = dv(1, 2);

  // dJ = 2 dM J V, keeping only the entries J depends on.
  const double jv00 = j00 * c.v(0, 0) + j02 * c.v(2, 0);
  const double jv01 = j00 * c.v(0, 1) + j02 * c.v(2, 1);
  const double jv02 = j00 * c.v(0, 2) + j02 * c.v(2, 2);
  const double jv10 = j11 * c.v(1, 0) + j12 * c.v(2, 0);
  const double jv11 = j11 * c.v(1, 1) + j12 * c.v(2, 1);
  const double jv12 = j11 * c.v(1, 2) + j12 * c.v(2, 2);
  const double dj00 = 2.0 * (dm00 * jv00 + dm01 * jv10);
  const double dj02 = 2.0 * (dm00 * jv02 + dm01 * jv12);
  const double dj11 = 2.0 * (dm01 * jv01 + dm11 * jv11);
  const double dj12 = 2.0 * (dm01 * jv02 + dm11 * jv12);

  Vec3 dxc;  // camera-space position cotangent

  // mean2d path (unclamped projection).
  dxc.x += g.mean_x * c.fx / z;
  dxc.y += g.mean_y * c.fy / z;
  dxc.z += -g.mean_x * c.fx * c.pc.x / z2 - g.mean_y * c.fy * c.pc.y / z2;

  // J path.
  dxc.z += dj00 * (-c.fx / z2) + dj11 * (-c.fy / z2) +
           dj02 * (2.0 * c.fx * c.tx / (z2 * z)) + dj12 * (2.0 * c.fy * c.ty / (z2 * z));
  const double dtx = dj02 * (-c.fx / z2);
  const double dty = dj12 * (-c.fy / z2);
  if (c.clamped_x)
    dxc.z += dtx * c.slim_x;
  else
    dxc.x += dtx;
  if (c.clamped_y)
    dxc.z += dty * c.slim_y;
  else
    dxc.y += dty;

  // rendered-depth channel.
  dxc.z += g.depth;

  out.position = c.r_cw.transposed() * dxc;

  // dV -> dSigma -> (log_scale, quaternion).
  const Mat3 dsigma = c.r_cw.transposed() * dv * c.r_cw;
  const Mat3 dm3 = dsigma * c.m3 * 2.0;
  const Mat3 rt_dm3 = c.rot.transposed() * dm3;
  out.log_scale = {rt_dm3(0, 0) * c.es.x, rt_dm3(1, 1) * c.es.y, rt_dm3(2, 2) * c.es.z};

  // dR = dM3 diag(es), then contract with dR/dq of the normalized quaternion.
  const Mat3 dr = Mat3::from_rows(
      {dm3(0, 0) * c.es.x, dm3(0, 1) * c.es.y, dm3(0, 2) * c.es.z},
      {dm3(1, 0) * c.es.x, dm3(1, 1) * c.es.y, dm3(1, 2) * c.es.z},
      {dm3(2, 0) * c.es.x, dm3(2, 1) * c.es.y, dm3(2, 2) * c.es.z});

  const double w = c.qhat.w, x = c.qhat.x, y = c.qhat.y, zq = c.qhat.z;
  Vec4 dq;
  dq.w = 2.0 * (-zq * dr(0, 1) + y * dr(0, 2) + zq * dr(1, 0) - x * dr(1, 2) -
                y * dr(2, 0) + x * dr(2, 1));
  dq.x = 2.0 * (y * dr(0, 1) + zq * dr(0, 2) + y * dr(1, 0) - 2.0 * x * dr(1, 1) -
                w * dr(1, 2) + zq * dr(2, 0) + w * dr(2, 1) - 2.0 * x * dr(2, 2));
  dq.y = 2.0 * (-2.0 * y * dr(0, 0) + x * dr(0, 1) + w * dr(0, 2) + x * dr(1, 0) +
                zq * dr(1, 2) - w * dr(2, 0) + zq * dr(2, 1) - 2.0 * y * dr(2, 2));
  dq.z = 2.0 * (-2.0 * zq * dr(0, 0) - w * dr(0, 1) + x * dr(0, 2) + w * dr(1, 0) -
                2.0 * zq * dr(1, 1) + y * dr(1, 2) + x * dr(2, 0) + y * dr(2, 1));

  const double qd = c.qhat.dot(dq);
  out.rotation = {(dq.w - c.qhat.w * qd) / c.qnorm, (dq.x - c.qhat.x * qd) / c.qnorm,
                  (dq.y - c.qhat.y * qd) / c.qnorm, (dq.z - c.qhat.z * qd) / c.qnorm};
  return out;
}

}  // namespace gsmem::detail
