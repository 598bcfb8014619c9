// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/retrieval/retrieval.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "gsmem/map/language_field.hpp"
#include "gsmem/retrieval/kdtree.hpp"

namespace gsmem {

std::vector<RegionOfInterest> retrieve_object_rois(const SceneGraph& graph,
                                                   const std::string& question,
                                                   const ObjectRanker& ranker,
                                                   const RetrievalConfig& cfg) {
  std::vector<RegionOfInterest> out;
  const std::vector<SceneGraph::ObjectSummary> objects = graph.list_objects();
  if (objects.empty()) return out;

  std::vector<uint64_t> ranking;
  try {
    ranking = ranker.rank_objects(question, objects);
  } catch (const std::exception&) {
    return out;  // a failed ranking is recoverable; exploration continues
  }

  std::unordered_map<uint64_t, const SceneGraphNode*> by_id;
  for (const SceneGraphNode& n : graph.nodes()) by_id.emplace(n.id, &n);

  std::unordered_set<uint64_t> used;
  for (uint64_t id : ranking) {
    if ((int)out.size() >= cfg.k_obj) break;
    const auto it = by_id.find(id);
    if (it == by_id.end() || !used.insert(id).second) continue;
    RegionOfInterest roi;
    roi.bbox = it->second->bbox.with_min_side(cfg.min_box_side);
    roi.provenance = RoiProvenance::object;
    roi.source_id = id;
    roi.score = 1.0 / (1.0 + (double)out.size());  // monotone in rank
    roi.best_pose = it->second->best_pose;
    out.push_back(std::move(roi));
  }
  return out;
}

std::vector<RegionOfInterest> retrieve_semantic_rois(
    const GaussianField& field, const std::vector<std::vector<double>>& query_embeddings,
    const RetrievalConfig& cfg) {
  std::vector<RegionOfInterest> out;
  if (field.size() == 0 || query_embeddings.empty()) return out;

  // Best similarity per Gaussian over all query embeddings. Unseen Gaussians
  // (zero feature weight) sit at the -1 sentinel and never pass the threshold.
  std::vector<double> sim(field.size(), -1.0);
  for (const std::vector<double>& q : query_embeddings) {
    const std::vector<double> s = query_similarity(field, q);
    for (size_t i = 0; i < s.size(); ++i) sim[i] = std::max(sim[i], s[i]);
  }

  std::vector<uint32_t> cand;
  for (size_t i = 0; i < sim.size(); ++i)
    if (sim[i] > cfg.tau_clip) cand.push_back((uint32_t)i);
  if (cand.empty()) return out;

  // Single-linkage clustering: union every pair within tau_d.
  std::vector<Vec3> pts(cand.size());
  for (size_t i = 0; i < cand.size(); ++i) pts[i] = field.position(cand[i]);
  const KdTree3 tree(pts);
  std::vector<uint32_t> parent(cand.size());
  std::iota(parent.begin(), parent.end(), 0u);
  const auto find = [&parent](uint32_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (uint32_t i = 0; i < (uint32_t)cand.size(); ++i)
    for (uint32_t j : tree.radius_query(pts[i], cfg.tau_d)) parent[find(i)] = find(j);

  std::map<uint32_t, std::vector<uint32_t>> components;  // root -> local indices
  for (uint32_t i = 0; i < (uint32_t)cand.size(); ++i)
    components[find(i)].push_back(i);

  struct Cluster {
    std::vector<uint32_t> members;  // field indices, ascending
    double mean_sim = 0.0;
  };
  std::vector<Cluster> clusters;
  for (const auto& [root, locals] : components) {
    if ((int)locals.size() < cfg.min_cluster_size) continue;
    Cluster cl;
    double total = 0.0;
    for (uint32_t li : locals) {
      cl.members.push_back(cand[li]);
      total += sim[cand[li]];
    }
    cl.mean_sim = total / (double)cl.members.size();
    clusters.push_back(std::move(cl));
  }
  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    if (a.mean_sim != b.mean_sim) return a.mean_sim > b.mean_sim;
    return a.members.front() < b.members.front();
  });
  if ((int)clusters.size() > cfg.k_cluster) clusters.resize(cfg.k_cluster);

  for (size_t rank = 0; rank < clusters.size(); ++rank) {
    RegionOfInterest roi;
    Aabb box;
    for (uint32_t id : clusters[rank].members) box.expand(field.position(id));
    roi.bbox = box.padded(cfg.semantic_pad).with_min_side(cfg.min_box_side);
    roi.provenance = RoiProvenance::semantic;
    roi.source_id = rank + 1;
    roi.score = clusters[rank].mean_sim;
    roi.member_gaussians = std::move(clusters[rank].members);
    out.push_back(std::move(roi));
  }
  return out;
}

}  // namespace gsmem
