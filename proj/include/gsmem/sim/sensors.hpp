// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "gsmem/map/language_field.hpp"
#include "gsmem/map/scene_graph.hpp"
#include "gsmem/sim/scene.hpp"

namespace gsmem {

// Detector noise model: every visible object is reported unless dropped, and
// surviving reports may carry a wrong label. Draws are deterministic per
// (seed, object index), so one object's fate never depends on the others.
struct DetectorConfig {
  double miss_rate = 0.0;        // probability a visible object is dropped
  double corruption_rate = 0.0;  // probability a report carries a wrong label
  std::string miss_label;        // restrict misses to this true label ("" = all)
};

// Ground-truth detections at a pose: one per object covering at least one
// pixel of the instance map, confidence uniform in [0.5, 1), box equal to the
// object's true bounds. Objects fully behind walls never appear.
std::vector<Detection> detect(const SceneSpec& scene, const Camera& cam, uint64_t seed,
                              const DetectorConfig& cfg = {});

// Per-pixel semantic encoder backed by the scene's ground truth: each pixel
// carries the unit embedding of the object underneath it, and exact zeros
// over background, walls, and floor. Text queries embed the most specific
// vocabulary label found in the text (zero vector when none matches).
class SimEmbedder final : public EmbeddingProvider {
 public:
  explicit SimEmbedder(const SceneSpec& scene) : scene_(&scene) {}

  int dim() const override;
  FeatureMap embed_image(const Keyframe& frame) const override;
  std::vector<double> embed_text(const std::string& text) const override;

 private:
  const SceneSpec* scene_;
};

}  // namespace gsmem
