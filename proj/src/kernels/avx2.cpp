// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

// AVX2 kernel variants: 4-wide double lanes over row segments, scalar
// remainder loops. Compiled with -mavx2 -mfma; only dispatched when the CPU
// reports support.

#include <cmath>
#include <immintrin.h>

#include "gsmem/kernels/kernels.hpp"
#include "simd_exp.hpp"

namespace gsmem::kernels {
namespace {

void splat_row_forward_avx2(const SplatPix& s, const RasterParams& rp, double py,
                            int x0, int x1, double* t, double* cr, double* cg,
                            double* cb, double* dep, double* w_out) {
  const int n = x1 - x0;
  const double dy = py - s.mean_y;
  const double qa = 0.5 * s.conic_a;
  const double qb = s.conic_b * dy;
  const double qc = 0.5 * s.conic_c * dy * dy;

  const __m256d vqa = _mm256_set1_pd(qa);
  const __m256d vqb = _mm256_set1_pd(qb);
  const __m256d vqc = _mm256_set1_pd(qc);
  const __m256d vzero = _mm256_setzero_pd();
  const __m256d vqcut = _mm256_set1_pd(rp.q_cut);
  const __m256d vtmin = _mm256_set1_pd(rp.t_min);
  const __m256d vamax = _mm256_set1_pd(rp.alpha_max);
  const __m256d vopa = _mm256_set1_pd(s.opacity);
  const __m256d vc0 = _mm256_set1_pd(s.color[0]);
  const __m256d vc1 = _mm256_set1_pd(s.color[1]);
  const __m256d vc2 = _mm256_set1_pd(s.color[2]);
  const __m256d vz = _mm256_set1_pd(s.depth);
  const __m256d vone = _mm256_set1_pd(1.0);

  __m256d vdx = _mm256_add_pd(_mm256_set1_pd(x0 - s.mean_x),
                              _mm256_set_pd(3.0, 2.0, 1.0, 0.0));
  const __m256d vfour = _mm256_set1_pd(4.0);

  int i = 0;
  for (; i + 4 <= n; i += 4, vdx = _mm256_add_pd(vdx, vfour)) {
    const __m256d q = _mm256_fmadd_pd(_mm256_fmadd_pd(vqa, vdx, vqb), vdx, vqc);
    const __m256d tv = _mm256_loadu_pd(t + i);
    __m256d active = _mm256_and_pd(_mm256_cmp_pd(q, vzero, _CMP_GE_OQ),
                                   _mm256_cmp_pd(q, vqcut, _CMP_LE_OQ));
    active = _mm256_and_pd(active, _mm256_cmp_pd(tv, vtmin, _CMP_GE_OQ));
    if (w_out) _mm256_storeu_pd(w_out + i, vzero);
    if (!_mm256_movemask_pd(active)) continue;

    const __m256d g = exp4d(_mm256_sub_pd(vzero, q));
    __m256d alpha = _mm256_min_pd(_mm256_mul_pd(vopa, g), vamax);
    alpha = _mm256_and_pd(alpha, active);
    const __m256d w = _mm256_mul_pd(alpha, tv);

    _mm256_storeu_pd(cr + i, _mm256_fmadd_pd(w, vc0, _mm256_loadu_pd(cr + i)));
    _mm256_storeu_pd(cg + i, _mm256_fmadd_pd(w, vc1, _mm256_loadu_pd(cg + i)));
    _mm256_storeu_pd(cb + i, _mm256_fmadd_pd(w, vc2, _mm256_loadu_pd(cb + i)));
    _mm256_storeu_pd(dep + i, _mm256_fmadd_pd(w, vz, _mm256_loadu_pd(dep + i)));
    _mm256_storeu_pd(t + i, _mm256_mul_pd(tv, _mm256_sub_pd(vone, alpha)));
    if (w_out) _mm256_storeu_pd(w_out + i, w);
  }

  for (; i < n; ++i) {
    if (w_out) w_out[i] = 0.0;
    if (t[i] < rp.t_min) continue;
    const double dx = (x0 + i) - s.mean_x;
    const double q = (qa * dx + qb) * dx + qc;
    if (q < 0.0 || q > rp.q_cut) continue;
    double alpha = s.opacity * std::exp(-q);
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

void splat_row_backward_avx2(const SplatPix& s, const RasterParams& rp, double py,
                             int x0, int x1, double* t, double* p_acc,
                             const double* u, const double* gr, const double* gg,
                             const double* gb, const double* gd, SplatGrad2d& acc) {
  const int n = x1 - x0;
  const double dy = py - s.mean_y;
  const double qa = 0.5 * s.conic_a;
  const double qb = s.conic_b * dy;
  const double qc = 0.5 * s.conic_c * dy * dy;

  const __m256d vqa = _mm256_set1_pd(qa);
  const __m256d vqb = _mm256_set1_pd(qb);
  const __m256d vqc = _mm256_set1_pd(qc);
  const __m256d vzero = _mm256_setzero_pd();
  const __m256d vqcut = _mm256_set1_pd(rp.q_cut);
  const __m256d vtmin = _mm256_set1_pd(rp.t_min);
  const __m256d vamax = _mm256_set1_pd(rp.alpha_max);
  const __m256d vopa = _mm256_set1_pd(s.opacity);
  const __m256d vc0 = _mm256_set1_pd(s.color[0]);
  const __m256d vc1 = _mm256_set1_pd(s.color[1]);
  const __m256d vc2 = _mm256_set1_pd(s.color[2]);
  const __m256d vz = _mm256_set1_pd(s.depth);
  const __m256d vone = _mm256_set1_pd(1.0);
  const __m256d vdyc = _mm256_set1_pd(dy);
  const __m256d vca = _mm256_set1_pd(s.conic_a);
  const __m256d vcb = _mm256_set1_pd(s.conic_b);
  const __m256d vcc = _mm256_set1_pd(s.conic_c);
  const __m256d vhalf = _mm256_set1_pd(0.5);

  __m256d acc_c0 = vzero, acc_c1 = vzero, acc_c2 = vzero, acc_sig = vzero;
  __m256d acc_mx = vzero, acc_my = vzero;
  __m256d acc_ca = vzero, acc_cb2 = vzero, acc_cc = vzero, acc_dep = vzero;

  __m256d vdx = _mm256_add_pd(_mm256_set1_pd(x0 - s.mean_x),
                              _mm256_set_pd(3.0, 2.0, 1.0, 0.0));
  const __m256d vfour = _mm256_set1_pd(4.0);

  int i = 0;
  for (; i + 4 <= n; i += 4, vdx = _mm256_add_pd(vdx, vfour)) {
    const __m256d q = _mm256_fmadd_pd(_mm256_fmadd_pd(vqa, vdx, vqb), vdx, vqc);
    const __m256d tv = _mm256_loadu_pd(t + i);
    __m256d active = _mm256_and_pd(_mm256_cmp_pd(q, vzero, _CMP_GE_OQ),
                                   _mm256_cmp_pd(q, vqcut, _CMP_LE_OQ));
    active = _mm256_and_pd(active, _mm256_cmp_pd(tv, vtmin, _CMP_GE_OQ));
    if (!_mm256_movemask_pd(active)) continue;

    const __m256d g = exp4d(_mm256_sub_pd(vzero, q));
    const __m256d alpha_raw = _mm256_mul_pd(vopa, g);
    __m256d alpha = _mm256_min_pd(alpha_raw, vamax);
    alpha = _mm256_and_pd(alpha, active);
    const __m256d w = _mm256_mul_pd(alpha, tv);

    const __m256d vgr = _mm256_loadu_pd(gr + i);
    const __m256d vgg = _mm256_loadu_pd(gg + i);
    const __m256d vgb = _mm256_loadu_pd(gb + i);
    const __m256d vgd = gd ? _mm256_loadu_pd(gd + i) : vzero;

    __m256d ui = _mm256_mul_pd(vgr, vc0);
    ui = _mm256_fmadd_pd(vgg, vc1, ui);
    ui = _mm256_fmadd_pd(vgb, vc2, ui);
    ui = _mm256_fmadd_pd(vgd, vz, ui);

    const __m256d p_new = _mm256_fmadd_pd(w, ui, _mm256_loadu_pd(p_acc + i));
    _mm256_storeu_pd(p_acc + i, p_new);
    const __m256d s_after = _mm256_sub_pd(_mm256_loadu_pd(u + i), p_new);
    const __m256d one_m_a = _mm256_sub_pd(vone, alpha);
    const __m256d d_alpha =
        _mm256_sub_pd(_mm256_mul_pd(tv, ui), _mm256_div_pd(s_after, one_m_a));

    acc_c0 = _mm256_fmadd_pd(w, vgr, acc_c0);
    acc_c1 = _mm256_fmadd_pd(w, vgg, acc_c1);
    acc_c2 = _mm256_fmadd_pd(w, vgb, acc_c2);
    acc_dep = _mm256_fmadd_pd(w, vgd, acc_dep);

    const __m256d grad_mask =
        _mm256_and_pd(active, _mm256_cmp_pd(alpha_raw, vamax, _CMP_LT_OQ));
    acc_sig = _mm256_add_pd(acc_sig,
                            _mm256_and_pd(_mm256_mul_pd(d_alpha, g), grad_mask));
    const __m256d dq = _mm256_and_pd(
        _mm256_sub_pd(vzero, _mm256_mul_pd(d_alpha, alpha_raw)), grad_mask);
    acc_mx = _mm256_fnmadd_pd(dq, _mm256_fmadd_pd(vca, vdx, _mm256_mul_pd(vcb, vdyc)),
                              acc_mx);
    acc_my = _mm256_fnmadd_pd(dq, _mm256_fmadd_pd(vcc, vdyc, _mm256_mul_pd(vcb, vdx)),
                              acc_my);
    const __m256d dx2 = _mm256_mul_pd(vdx, vdx);
    acc_ca = _mm256_fmadd_pd(dq, _mm256_mul_pd(vhalf, dx2), acc_ca);
    acc_cb2 = _mm256_fmadd_pd(dq, _mm256_mul_pd(vdx, vdyc), acc_cb2);
    acc_cc = _mm256_fmadd_pd(dq, _mm256_set1_pd(0.5 * dy * dy), acc_cc);

    _mm256_storeu_pd(t + i, _mm256_mul_pd(tv, one_m_a));
  }

  acc.color[0] += hsum4d(acc_c0);
  acc.color[1] += hsum4d(acc_c1);
  acc.color[2] += hsum4d(acc_c2);
  acc.sigma += hsum4d(acc_sig);
  acc.mean_x += hsum4d(acc_mx);
  acc.mean_y += hsum4d(acc_my);
  acc.conic_a += hsum4d(acc_ca);
  acc.conic_b += hsum4d(acc_cb2);
  acc.conic_c += hsum4d(acc_cc);
  acc.depth += hsum4d(acc_dep);

  for (; i < n; ++i) {
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

    if (alpha_raw < rp.alpha_max) {
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

void axpy_avx2(int n, double a, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  int i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

double l1_grad_avx2(int n, const double* pred, const double* ref, double coeff,
                    double* grad) {
  const __m256d vzero = _mm256_setzero_pd();
  const __m256d vp = _mm256_set1_pd(coeff);
  const __m256d vn = _mm256_set1_pd(-coeff);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));
  __m256d vloss = vzero;
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pred + i), _mm256_loadu_pd(ref + i));
    vloss = _mm256_add_pd(vloss, _mm256_and_pd(d, abs_mask));
    const __m256d gp = _mm256_and_pd(_mm256_cmp_pd(d, vzero, _CMP_GT_OQ), vp);
    const __m256d gn = _mm256_and_pd(_mm256_cmp_pd(d, vzero, _CMP_LT_OQ), vn);
    _mm256_storeu_pd(grad + i, _mm256_or_pd(gp, gn));
  }
  double loss = hsum4d(vloss);
  for (; i < n; ++i) {
    const double d = pred[i] - ref[i];
    loss += std::fabs(d);
    grad[i] = d > 0.0 ? coeff : (d < 0.0 ? -coeff : 0.0);
  }
  return loss;
}

double l1_grad_masked_avx2(int n, const double* pred, const double* ref, double coeff,
                           double* grad) {
  const __m256d vzero = _mm256_setzero_pd();
  const __m256d vp = _mm256_set1_pd(coeff);
  const __m256d vn = _mm256_set1_pd(-coeff);
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));
  __m256d vloss = vzero;
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(ref + i);
    const __m256d valid = _mm256_cmp_pd(r, vzero, _CMP_NEQ_OQ);
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pred + i), r);
    vloss = _mm256_add_pd(vloss, _mm256_and_pd(_mm256_and_pd(d, abs_mask), valid));
    const __m256d gp = _mm256_and_pd(_mm256_cmp_pd(d, vzero, _CMP_GT_OQ), vp);
    const __m256d gn = _mm256_and_pd(_mm256_cmp_pd(d, vzero, _CMP_LT_OQ), vn);
    _mm256_storeu_pd(grad + i, _mm256_and_pd(_mm256_or_pd(gp, gn), valid));
  }
  double loss = hsum4d(vloss);
  for (; i < n; ++i) {
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

namespace detail {
const KernelTable& avx2_table_impl() {
  static const KernelTable table = {
      "avx2",    splat_row_forward_avx2, splat_row_backward_avx2,
      axpy_avx2, l1_grad_avx2,           l1_grad_masked_avx2,
  };
  return table;
}
}  // namespace detail

}  // namespace gsmem::kernels
