// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "gsmem/explore/oracle.hpp"
#include "gsmem/sim/scene.hpp"

namespace gsmem {

struct ScriptedOracleConfig {
  // An answer needs this many pixels of the target reproduced at 256x256;
  // the requirement scales with the actual pixel count.
  double min_pixels_at_256 = 100.0;
  double alpha_floor = 0.5;   // rendered opacity needed to count a pixel
  double color_tol = 0.25;    // per-channel tolerance against the true color
};

// Deterministic stand-in for a vision-language model, built on ground truth:
// - rank_objects: graph nodes whose label matches the question's target
//   label (aliases collapse), highest confidence first.
// - score_frontier: fraction of the view that shows objects sharing a
//   semantic tag with the target.
// - answer_question: answers iff some rendered view reproduces enough pixels
//   of the target object (right place, opaque, right color); confidence is
//   the matched pixel fraction of that view.
class ScriptedOracle final : public Oracle {
 public:
  explicit ScriptedOracle(const SceneSpec& scene, ScriptedOracleConfig cfg = {})
      : scene_(&scene), cfg_(cfg) {}

  std::vector<uint64_t> rank_objects(
      const std::string& question,
      const std::vector<SceneGraph::ObjectSummary>& objects) const override;

  double score_frontier(const std::string& question, const Camera& pose,
                        const ImageF& view) const override;

  OracleAnswer answer_question(const std::string& question,
                               const std::vector<PosedRender>& views) const override;

 private:
  const SceneSpec* scene_;
  ScriptedOracleConfig cfg_;
};

}  // namespace gsmem
