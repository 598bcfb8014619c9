// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "gsmem/core/rng.hpp"
#include "gsmem/map/keyframe.hpp"
#include "gsmem/splat/field.hpp"
#include "gsmem/splat/projection.hpp"

namespace gsmem {

// Reprojection flow: a 32x32 grid of `last_kf` pixels is back-projected with
// its depth and reprojected into `frame`; the result is the mean displacement
// (pixels) over grid points that carry depth and land in-bounds with positive
// camera depth. +inf when no grid point qualifies, which forces a keyframe.
double average_flow(const Keyframe& frame, const Keyframe& last_kf);

struct SeedingConfig {
  double alpha_threshold = 0.5;  // blocks whose mean render alpha is below this get a seed
  int block = 4;                 // seeding block side, pixels
  double sigma_px = 2.0;         // target projected standard deviation of a seed, pixels
  double opacity = 0.7;          // initial opacity (stored as its logit)
};

// Inserts `frame` as a keyframe iff the store is empty or its flow against
// the last keyframe exceeds flow_threshold. On insert, the window slides and
// new Gaussians are seeded wherever the current render leaves a block of
// pixels mostly transparent: one Gaussian per block, placed by back-projected
// depth, colored by the block's representative pixel, sized by local depth.
// Returns whether the frame was inserted.
bool maybe_insert_keyframe(GaussianField& field, const Keyframe& frame, WindowState& state,
                           double flow_threshold, const RasterSettings& rs = {},
                           const SeedingConfig& seed = {});

struct OptimizerConfig {
  double lambda_depth = 0.5;
  double lr_position = 1.6e-4;  // scaled by the field extent (floored at 1 m)
  double lr_color = 2.5e-3;
  double lr_opacity = 5e-2;
  double lr_scale = 5e-3;
  double lr_rotation = 5e-3;
  int extra_frames = 2;          // random frames drawn from outside the window
  double logit_clamp = 12.0;     // |opacity logit| bound after a step
  double log_scale_min = -9.0;
  double log_scale_max = 3.0;
};

struct StepResult {
  double loss_rgb = 0.0;    // sum over frames of mean per-pixel L1 color error
  double loss_depth = 0.0;  // same for depth, ignoring pixels with no return
  std::vector<uint64_t> frames_used;  // the optimization set T, ascending ids
};

// One gradient step against the window plus `extra_frames` random keyframes
// sampled without replacement from outside it. Losses are the values BEFORE
// the step. Per-group learning rates; plain gradient descent.
StepResult optimize_step(GaussianField& field, const WindowState& state, Rng& rng,
                         const OptimizerConfig& cfg = {}, const RasterSettings& rs = {});

}  // namespace gsmem
