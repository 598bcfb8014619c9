// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/sim/sensors.hpp"

#include <algorithm>

#include "gsmem/core/rng.hpp"
#include "gsmem/sim/vocab.hpp"

namespace gsmem {

std::vector<Detection> detect(const SceneSpec& scene, const Camera& cam, uint64_t seed,
                              const DetectorConfig& cfg) {
  const std::vector<int> instances = render_instances(scene, cam);
  std::vector<char> visible(scene.objects.size(), 0);
  for (int inst : instances)
    if (inst >= 0) visible[inst] = 1;

  std::vector<Detection> out;
  for (size_t i = 0; i < scene.objects.size(); ++i) {
    if (!visible[i]) continue;
    const SceneObject& obj = scene.objects[i];
    Rng rng(mix_seed(seed, i));
    // Fixed draw order (confidence, miss, corruption) keeps each decision
    // stable regardless of the configured rates.
    const double confidence = uniform(rng, 0.5, 1.0);
    const double miss_draw = uniform(rng, 0.0, 1.0);
    const double corrupt_draw = uniform(rng, 0.0, 1.0);
    const uint64_t corrupt_pick = rng();

    const bool miss_applies = cfg.miss_label.empty() || obj.label == cfg.miss_label;
    if (miss_applies && miss_draw < cfg.miss_rate) continue;

    Detection det;
    det.label = obj.label;
    if (corrupt_draw < cfg.corruption_rate) {
      const std::vector<std::string>& vocab = vocab_labels();
      size_t pick = corrupt_pick % vocab.size();
      if (vocab[pick] == canonical_label(obj.label)) pick = (pick + 1) % vocab.size();
      det.label = vocab[pick];
    }
    det.confidence = confidence;
    det.bbox = obj.bounds();
    det.observing_pose = cam;
    out.push_back(std::move(det));
  }
  return out;
}

int SimEmbedder::dim() const { return kFeatureDim; }

FeatureMap SimEmbedder::embed_image(const Keyframe& frame) const {
  const int w = frame.camera.k.width, h = frame.camera.k.height;
  const std::vector<int> instances = render_instances(*scene_, frame.camera);
  // Embeddings are shared between pixels of one object; cache per object.
  std::vector<std::vector<double>> cache(scene_->objects.size());
  FeatureMap out(w, h, kFeatureDim);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int inst = instances[(size_t)y * w + x];
      if (inst < 0) continue;
      std::vector<double>& emb = cache[inst];
      if (emb.empty()) emb = embed_label(scene_->objects[inst].label);
      std::copy(emb.begin(), emb.end(), out.pixel(y, x));
    }
  }
  return out;
}

std::vector<double> SimEmbedder::embed_text(const std::string& text) const {
  const std::string label = target_label(text);
  if (label.empty()) return std::vector<double>(kFeatureDim, 0.0);
  return embed_label(label);
}

}  // namespace gsmem
