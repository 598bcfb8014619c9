// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/splat/projection.hpp"

#include <cmath>

namespace gsmem {

std::optional<ProjectedSplat> project_gaussian(const Vec3& position, const Vec3& log_scale,
                                               const Vec4& rotation, const Camera& cam,
                                               const RasterSettings& rs) {
  const Vec3 pc = cam.pose.to_camera(position);
  if (pc.z <= rs.near_plane) return std::nullopt;

  const double z = pc.z;
  const double fx = cam.k.fx, fy = cam.k.fy;

  ProjectedSplat out;
  out.depth = z;
  out.mean2d = {fx * pc.x / z + cam.k.cx, fy * pc.y / z + cam.k.cy};

  // The Jacobian uses view-plane coordinates clamped to 1.3x the frustum so a
  // splat far off-axis cannot blow up the linearization.
  const double limx = 1.3 * (0.5 * cam.k.width) / fx;
  const double limy = 1.3 * (0.5 * cam.k.height) / fy;
  const double tx = clamp(pc.x / z, -limx, limx) * z;
  const double ty = clamp(pc.y / z, -limy, limy) * z;

  const double j00 = fx / z, j02 = -fx * tx / (z * z);
  const double j11 = fy / z, j12 = -fy * ty / (z * z);
  out.jac[0] = j00; out.jac[1] = 0.0; out.jac[2] = j02;
  out.jac[3] = 0.0; out.jac[4] = j11; out.jac[5] = j12;

  const Mat3 rot = quat_to_mat(rotation.normalized());
  const Mat3 m3 = rot * Mat3::diag(std::exp(log_scale.x), std::exp(log_scale.y),
                                   std::exp(log_scale.z));
  const Mat3 sigma = m3 * m3.transposed();
  const Mat3 v = cam.pose.r_cw * sigma * cam.pose.r_cw.transposed();

  // cov2d = J V J^T with J = [[j00, 0, j02], [0, j11, j12]].
  const double v00 = v(0, 0), v01 = v(0, 1), v02 = v(0, 2);
  const double v11 = v(1, 1), v12 = v(1, 2), v22 = v(2, 2);
  out.cov2d[0] = j00 * (j00 * v00 + j02 * v02) + j02 * (j00 * v02 + j02 * v22);
  out.cov2d[1] = j00 * (j11 * v01 + j12 * v02) + j02 * (j11 * v12 + j12 * v22);
  out.cov2d[2] = j11 * (j11 * v11 + j12 * v12) + j12 * (j11 * v12 + j12 * v22);

  const double margin =
      rs.cull_sigma * std::sqrt(cov2d_max_eigenvalue(out.cov2d, rs.cov_reg));
  if (out.mean2d.x < -margin || out.mean2d.x > cam.k.width - 1 + margin ||
      out.mean2d.y < -margin || out.mean2d.y > cam.k.height - 1 + margin)
    return std::nullopt;

  return out;
}

double cov2d_max_eigenvalue(const double cov2d[3], double cov_reg) {
  const double a = cov2d[0] + cov_reg, b = cov2d[1], c = cov2d[2] + cov_reg;
  const double mid = 0.5 * (a + c);
  const double disc = std::sqrt(std::max(0.0, 0.25 * (a - c) * (a - c) + b * b));
  return mid + disc;
}

}  // namespace gsmem
