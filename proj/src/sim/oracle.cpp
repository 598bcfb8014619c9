// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/sim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gsmem/sim/vocab.hpp"

namespace gsmem {

namespace {

// Scene object indices whose label means the same thing as `target`.
std::vector<int> matching_objects(const SceneSpec& scene, const std::string& target) {
  std::vector<int> out;
  for (size_t i = 0; i < scene.objects.size(); ++i)
    if (canonical_label(scene.objects[i].label) == target) out.push_back((int)i);
  return out;
}

}  // namespace

std::vector<uint64_t> ScriptedOracle::rank_objects(
    const std::string& question,
    const std::vector<SceneGraph::ObjectSummary>& objects) const {
  const std::string target = target_label(question);
  if (target.empty()) return {};
  std::vector<const SceneGraph::ObjectSummary*> matched;
  for (const SceneGraph::ObjectSummary& obj : objects)
    if (canonical_label(obj.label) == target) matched.push_back(&obj);
  std::sort(matched.begin(), matched.end(),
            [](const SceneGraph::ObjectSummary* a, const SceneGraph::ObjectSummary* b) {
              if (a->confidence != b->confidence) return a->confidence > b->confidence;
              return a->id < b->id;
            });
  std::vector<uint64_t> out;
  out.reserve(matched.size());
  for (const SceneGraph::ObjectSummary* m : matched) out.push_back(m->id);
  return out;
}

double ScriptedOracle::score_frontier(const std::string& question, const Camera& pose,
                                      const ImageF&) const {
  const std::string target = target_label(question);
  if (target.empty()) return 0.0;

  // Tags of the target: from scene objects carrying that label, with the
  // vocabulary's static tags as fallback when the target is not in the scene.
  std::set<std::string> target_tags;
  for (int idx : matching_objects(*scene_, target))
    for (const std::string& tag : scene_->objects[idx].tags) target_tags.insert(tag);
  if (target_tags.empty())
    for (const std::string& tag : vocab_tags(target)) target_tags.insert(tag);
  if (target_tags.empty()) return 0.0;

  std::vector<char> shares(scene_->objects.size(), 0);
  for (size_t i = 0; i < scene_->objects.size(); ++i)
    for (const std::string& tag : scene_->objects[i].tags)
      if (target_tags.count(tag)) {
        shares[i] = 1;
        break;
      }

  const std::vector<int> instances = render_instances(*scene_, pose);
  size_t hits = 0;
  for (int inst : instances)
    if (inst >= 0 && shares[inst]) ++hits;
  return std::clamp((double)hits / (double)instances.size(), 0.0, 1.0);
}

OracleAnswer ScriptedOracle::answer_question(const std::string& question,
                                             const std::vector<PosedRender>& views) const {
  const std::string target = target_label(question);
  if (target.empty()) return {};
  const std::vector<int> targets = matching_objects(*scene_, target);
  if (targets.empty()) return {};
  std::vector<char> is_target(scene_->objects.size(), 0);
  for (int idx : targets) is_target[idx] = 1;

  OracleAnswer best;
  for (const PosedRender& view : views) {
    const int w = view.camera.k.width, h = view.camera.k.height;
    if (view.render.color.width != w || view.render.color.height != h) continue;
    const std::vector<int> instances = render_instances(*scene_, view.camera);
    size_t matched = 0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int inst = instances[(size_t)y * w + x];
        if (inst < 0 || !is_target[inst]) continue;
        if (view.render.alpha.at(0, y, x) < cfg_.alpha_floor) continue;
        const Vec3& truth = scene_->objects[inst].color;
        if (std::abs(view.render.color.at(0, y, x) - truth.x) > cfg_.color_tol) continue;
        if (std::abs(view.render.color.at(1, y, x) - truth.y) > cfg_.color_tol) continue;
        if (std::abs(view.render.color.at(2, y, x) - truth.z) > cfg_.color_tol) continue;
        ++matched;
      }
    }
    const double needed =
        std::max(1.0, std::round(cfg_.min_pixels_at_256 * (double)w * h / 65536.0));
    const double fraction = (double)matched / ((double)w * h);
    if ((double)matched >= needed && fraction > best.confidence) {
      best.answered = true;
      best.answer = target;
      best.confidence = fraction;
    }
  }
  return best;
}

}  // namespace gsmem
