// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

// Reference kernels. Straight-line scalar code; the SIMD variants are
// equivalence-tested against these.

#include <cmath>

#include "gsmem/kernels/kernels.hpp"

namespace gsmem::kernels {
namespace {

void splat_row_forward_scalar(const SplatPix& s, const RasterParams& rp, double py,
                              int x0, int x1, double* t, double* cr, double* cg,
                              double* cb, double* dep, double* w_out) {
  const double dy = py - s.mean_y;
  const double qa = 0.5 * s.conic_a;
  const double qb = s.conic_b * dy;
  const double qc = 0.5 * s.conic_c * dy * dy;
  for (int i = 0; i < x1 - x0; ++i) {
    if (w_out) w_out[i] = 0.0;
    if (t[i] < rp.t_min) continue;
    const double dx = (x0 + i) - s.mean_x;
    const double q = (qa * dx + qb) * dx + qc;
    if (q < 0.0 || q > rp.q_cut) continue;
    const double g = std::exp(-q);
    double alpha = s.opacity * g;
    if (alpha > rp.alpha_max) alpha = rp.alpha_max;
    const double w = alpha * t[i];
    cr[i] += w * s.color[0];
    cg[i] += w * s.color[1];
    cb[i] += w * s.color[2];
    dep[i] += w * s.depth;
    t[i] *= 1.0 - alpha;
    if (w_out) w_out[i] = w;
  }
}

void splat_row_backward_scalar(const SplatPix& s, const RasterParams& rp, double py,
                               int x0, int x1, double* t, double* p_acc,
                               const double* u, const double* gr, const double* gg,
                               const double* gb, const double* gd, SplatGrad2d& acc) {
  const double dy = py - s.mean_y;
  const double qa = 0.5 * s.conic_a;
  const double qb = s.conic_b * dy;
  const double qc = 0.5 * s.conic_c * dy * dy;
  for (int i = 0; i < x1 - x0; ++i) {
    if (t[i] < rp.t_min) continue;
    const double dx = (x0 + i) - s.mean_x;
    const double q = (qa * dx + qb) * dx + qc;
    if (q < 0.0 || q > rp.q_cut) continue;
    const double g = std::exp(-q);
    const double alpha_raw = s.opacity * g;
    const double alpha = alpha_raw > rp.alpha_max ? rp.alpha_max : alpha_raw;
    const double w = alpha * t[i];

    const double gdi = gd ? gd[i] : 0.0;
    const double ui = gr[i] * s.color[0] + gg[i] * s.color[1] + gb[i] * s.color[2] +
                      gdi * s.depth;
    p_acc[i] += w * ui;
    const double s_after = u[i] - p_acc[i];
    const double d_alpha = t[i] * ui - s_after / (1.0 - alpha);

    acc.color[0] += w * gr[i];
    acc.color[1] += w * gg[i];
    acc.color[2] += w * gb[i];
    acc.depth += w * gdi;

    if (alpha_raw < rp.alpha_max) {  // the clamp zeroes the geometric gradient
      acc.sigma += d_alpha * g;
      const double dq = -d_alpha * alpha_raw;
      acc.mean_x -= dq * (s.conic_a * dx + s.conic_b * dy);
      acc.mean_y -= dq * (s.conic_c * dy + s.conic_b * dx);
      acc.conic_a += dq * 0.5 * dx * dx;
      acc.conic_b += dq * dx * dy;
      acc.conic_c += dq * 0.5 * dy * dy;
    }
    t[i] *= 1.0 - alpha;
  }
}

void axpy_scalar(int n, double a, const double* x, double* y) {
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

double l1_grad_scalar(int n, const double* pred, const double* ref, double coeff,
                      double* grad) {
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = pred[i] - ref[i];
    loss += std::fabs(d);
    grad[i] = d > 0.0 ? coeff : (d < 0.0 ? -coeff : 0.0);
  }
  return loss;
}

double l1_grad_masked_scalar(int n, const double* pred, const double* ref, double coeff,
                             double* grad) {
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    if (ref[i] == 0.0) {
      grad[i] = 0.0;
      continue;
    }
    const double d = pred[i] - ref[i];
    loss += std::fabs(d);
    grad[i] = d > 0.0 ? coeff : (d < 0.0 ? -coeff : 0.0);
  }
  return loss;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {
      "scalar",          splat_row_forward_scalar, splat_row_backward_scalar,
      axpy_scalar,       l1_grad_scalar,           l1_grad_masked_scalar,
  };
  return table;
}

}  // namespace gsmem::kernels
