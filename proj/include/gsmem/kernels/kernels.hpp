// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

namespace gsmem::kernels {

// Per-splat constants consumed by the row kernels. conic_* is the inverse of
// the regularized screen-space covariance [[a, b], [b, c]].
struct SplatPix {
  double mean_x = 0.0, mean_y = 0.0;
  double conic_a = 0.0, conic_b = 0.0, conic_c = 0.0;
  double opacity = 0.0;  // sigma in (0, 1)
  double color[3] = {0.0, 0.0, 0.0};
  double depth = 0.0;
};

struct RasterParams {
  double q_cut = 4.5;      // contribution evaluated only where 0.5 d^T conic d <= q_cut
  double alpha_max = 0.99; // per-pixel alpha clamp
  double t_min = 1e-4;     // transmittance early-out threshold
};

// Front-to-back compositing of one splat over the row segment [x0, x1) at
// image row py. All pointers are pre-offset so index 0 is pixel x0. Per pixel:
// alpha = min(opacity * exp(-q), alpha_max), w = alpha * t; the kernel
// accumulates w * {color, depth} into the channel rows, multiplies t by
// (1 - alpha), and writes w into w_out when non-null. Pixels with t < t_min or
// q outside [0, q_cut] are untouched (w = 0).
using SplatRowForwardFn = void (*)(const SplatPix&, const RasterParams&, double py,
                                   int x0, int x1, double* t, double* cr, double* cg,
                                   double* cb, double* dep, double* w_out);

// Screen-space gradient accumulator for one splat.
struct SplatGrad2d {
  double color[3] = {0.0, 0.0, 0.0};
  double sigma = 0.0;   // d/d opacity, before the logit chain
  double mean_x = 0.0, mean_y = 0.0;
  double conic_a = 0.0, conic_b = 0.0, conic_c = 0.0;
  double depth = 0.0;   // from the rendered-depth cotangent
};

// Gradient counterpart of the forward row walk. Must be called with splats in
// the same front-to-back order and with t freshly reset to 1: it replays the
// forward recurrence while accumulating parameter gradients. u is the
// per-pixel total cotangent contraction (gc . C + gd . D), p_acc the running
// front-to-back prefix of the same sum; gr/gg/gb/gd are cotangent rows
// (gd may be null).
using SplatRowBackwardFn = void (*)(const SplatPix&, const RasterParams&, double py,
                                    int x0, int x1, double* t, double* p_acc,
                                    const double* u, const double* gr, const double* gg,
                                    const double* gb, const double* gd, SplatGrad2d& acc);

// y[i] += a * x[i]
using AxpyFn = void (*)(int n, double a, const double* x, double* y);

// Returns sum |pred - ref|; writes coeff * sign(pred - ref) into grad.
using L1GradFn = double (*)(int n, const double* pred, const double* ref, double coeff,
                            double* grad);

// Same, but pixels with ref == 0 contribute no loss and zero gradient.
using L1GradMaskedFn = double (*)(int n, const double* pred, const double* ref,
                                  double coeff, double* grad);

struct KernelTable {
  const char* name;
  SplatRowForwardFn splat_row_forward;
  SplatRowBackwardFn splat_row_backward;
  AxpyFn axpy;
  L1GradFn l1_grad;
  L1GradMaskedFn l1_grad_masked;
};

const KernelTable& scalar_table();

// True when the AVX2 variants are compiled in and this CPU supports them.
bool avx2_available();
const KernelTable& avx2_table();

// Active table. Resolution order: set_backend(), then the GSMEM_KERNELS
// environment variable ("scalar" | "avx2" | "auto"), then auto-detection.
const KernelTable& active();
void set_backend(std::string_view name);
const char* backend_name();

}  // namespace gsmem::kernels
