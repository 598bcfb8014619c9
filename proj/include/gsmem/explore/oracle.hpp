// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "gsmem/core/camera.hpp"
#include "gsmem/core/image.hpp"
#include "gsmem/retrieval/retrieval.hpp"
#include "gsmem/splat/rasterizer.hpp"

namespace gsmem {

// A rendered view paired with the camera that produced it, so an oracle can
// reason about what the image should contain.
struct PosedRender {
  Camera camera;
  RenderOutput render;
};

struct OracleAnswer {
  bool answered = false;
  std::string answer;
  double confidence = 0.0;  // in [0, 1]
};

// The reasoning seam of the engine: ranks graph objects against a question,
// scores how promising a frontier view looks, and decides whether rendered
// ROI views suffice to answer. Implementations must be deterministic.
class Oracle : public ObjectRanker {
 public:
  // Relevance of one frontier approach view to the question, nominally in
  // [0, 1]; callers clamp. `view` is the 3-plane color image the agent would
  // see (live or rendered from memory, depending on configuration).
  virtual double score_frontier(const std::string& question, const Camera& pose,
                                const ImageF& view) const = 0;

  virtual OracleAnswer answer_question(const std::string& question,
                                       const std::vector<PosedRender>& views) const = 0;
};

// Oracle that knows nothing: no rankings, zero frontier scores, no answers.
// Reduces the hybrid policy to pure geometric exploration.
class NullOracle final : public Oracle {
 public:
  std::vector<uint64_t> rank_objects(
      const std::string&, const std::vector<SceneGraph::ObjectSummary>&) const override {
    return {};
  }
  double score_frontier(const std::string&, const Camera&, const ImageF&) const override {
    return 0.0;
  }
  OracleAnswer answer_question(const std::string&,
                               const std::vector<PosedRender>&) const override {
    return {};
  }
};

}  // namespace gsmem
