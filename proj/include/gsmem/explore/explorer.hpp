// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gsmem/core/camera.hpp"
#include "gsmem/core/rng.hpp"
#include "gsmem/explore/oracle.hpp"
#include "gsmem/map/language_field.hpp"
#include "gsmem/map/mapper.hpp"
#include "gsmem/map/scene_graph.hpp"
#include "gsmem/retrieval/retrieval.hpp"
#include "gsmem/sim/vocab.hpp"
#include "gsmem/sim/world.hpp"
#include "gsmem/splat/field.hpp"
#include "gsmem/vol/occupancy.hpp"
#include "gsmem/vol/tsdf.hpp"

namespace gsmem {

// One candidate next viewpoint, anchored at a frontier cluster.
struct FrontierCandidate {
  FrontierCluster cluster;
  Camera approach_pose;  // at the cluster centroid, facing the outward normal
  double s_sem = 0.0;    // semantic relevance, always in [0, 1]
  double s_geo = 0.0;    // expected information gain, finite and >= 0
};

enum class FrontierPolicy { hybrid, uniform_random };

struct ExplorerConfig {
  double tau_s = 0.4;  // semantic branch taken only when max s_sem exceeds
                       // this strictly
  int max_steps = 40;
  double answer_confidence_threshold = 0.0;
  int geo_width = 64;   // render size for the information score
  int geo_height = 64;
  bool score_on_live_view = true;  // score frontiers on simulator views;
                                   // false renders the memory instead
  int opt_steps = 10;              // map-optimization iterations per step
  int max_rois = 2;                // ROI views handed to the oracle per step
  int frontier_min_cluster = 5;    // smaller frontier clusters are ignored
  double stop_coverage = -1.0;     // end the episode at this ground-truth
                                   // coverage fraction (< 0 disables)
  FrontierPolicy policy = FrontierPolicy::hybrid;
};

// Everything the incremental engine needs beyond the world: one bundle so
// episodes, queries, and the CLI share a single configuration surface.
struct EngineParams {
  double flow_threshold = 8.0;  // keyframe gate, mean pixels of motion
  RasterSettings raster;
  SeedingConfig seeding;
  OptimizerConfig optimizer;
  AggregationConfig aggregation;
  SceneGraph::MatchConfig matching;
  RetrievalConfig retrieval;
  ExplorerConfig explorer;
};

// The persistent spatial memory: splat field, keyframe store, object graph,
// and volumetric grids. Survives across episodes (lifelong operation) and is
// what snapshots serialize.
struct EngineState {
  explicit EngineState(int feature_dim = kFeatureDim, uint64_t seed = 1)
      : field(feature_dim), rng(mix_seed(seed, fnv1a("engine"))) {}

  GaussianField field;
  WindowState window;
  SceneGraph graph;
  std::optional<TsdfGrid> tsdf;  // allocated on the first world update
  OccupancyGrid occupancy;       // derived slice of the TSDF
  std::vector<std::array<int, 2>> collision_cells;  // bumped during motion
  Rng rng;
};

// Camera standing at the cluster centroid at agent height, facing the
// cluster's outward normal, with the world's agent intrinsics.
Camera frontier_approach_pose(const FrontierCluster& cluster, const SimWorld& world);

// Relevance of the view at the candidate pose to the question, clamped to
// [0, 1] (non-finite oracle output scores 0).
double semantic_frontier_score(const Oracle& oracle, const std::string& question,
                               const Camera& pose, const ImageF& view);

// Trace of the rendering information matrix at `pose`, evaluated at a
// reduced resolution that keeps the pose's field of view.
double geometric_frontier_score(const GaussianField& field, const Camera& pose,
                                int width = 64, int height = 64,
                                const RasterSettings& rs = {});

// Index of the next frontier: the best semantic candidate when its score
// strictly exceeds tau_s, otherwise the best geometric one. Ties go to the
// lowest index; -1 when there are no candidates.
int choose_frontier(const std::vector<FrontierCandidate>& candidates,
                    const ExplorerConfig& cfg);

// Metric length of an 8-connected cell path.
double path_length_m(const std::vector<std::array<int, 2>>& path, double cell_size);

enum class EpisodeOutcome { answered, exhausted, max_steps, coverage_reached };
const char* outcome_name(EpisodeOutcome outcome);

struct StepRecord {
  int step = 0;  // 1-based
  Vec2 agent_xy{0.0, 0.0};
  double agent_yaw = 0.0;  // at sensing time
  int keyframes_added = 0;
  size_t gaussians = 0;
  double loss_rgb = 0.0;  // last optimizer iteration of this step
  double loss_depth = 0.0;
  int detections = 0;
  size_t graph_nodes = 0;
  int rois = 0;
  bool answered = false;
  double answer_confidence = 0.0;
  int frontiers = 0;
  std::vector<double> s_sem;  // per candidate, empty under uniform_random
  std::vector<double> s_geo;
  int chosen = -1;  // candidate index, -1 when no move happened
  bool semantic_branch = false;
  Vec2 target_centroid{0.0, 0.0};
  int cells_moved = 0;
  bool collision = false;
  double coverage = 0.0;  // against the world's ground-truth free space
};

struct EpisodeResult {
  EpisodeOutcome outcome = EpisodeOutcome::exhausted;
  std::string answer;
  double confidence = 0.0;
  int steps = 0;
  double trajectory_length = 0.0;  // meters traveled during this episode
  std::vector<StepRecord> log;
};

// The explore-retrieve-answer loop. Per step: acquire three views, update
// the map (keyframes, optimization, features, graph, TSDF/occupancy), try to
// answer the question from rendered ROI views, and otherwise pick a frontier
// and move there. Ends on a confident answer, on running out of frontiers,
// on the step budget, or at the optional coverage target.
EpisodeResult run_episode(SimWorld& world, EngineState& state, const std::string& question,
                          const Oracle& oracle, const EmbeddingProvider& embedder,
                          const EngineParams& params = {});

// Answer a question from memory alone: retrieval, viewpoint selection, and
// rendered-view answering without touching any world. `location` is the
// centroid of the highest-ranked ROI when one exists.
struct QueryResult {
  bool answered = false;
  std::string answer;
  double confidence = 0.0;
  int rois = 0;
  std::optional<Vec3> location;
};
QueryResult query_memory(const EngineState& state, const std::string& question,
                         const Oracle& oracle, const EmbeddingProvider& embedder,
                         const EngineParams& params = {});

// Object-goal navigation: explore until the goal object is confidently
// recognized, then drive to the remembered location. Success means ending
// within 1 m of the ground-truth object; SPL weights success by the ratio of
// the ground-truth shortest path to the distance actually traveled.
struct NavigationResult {
  bool success = false;
  double spl = 0.0;
  double shortest_m = 0.0;  // ground-truth shortest path from the start
  double traveled_m = 0.0;  // actual trajectory over the whole episode
  Vec2 final_xy{0.0, 0.0};
  Vec2 goal_xy{0.0, 0.0};
  EpisodeResult episode;
};
NavigationResult run_navigation_episode(SimWorld& world, EngineState& state,
                                        const std::string& goal, const Oracle& oracle,
                                        const EmbeddingProvider& embedder,
                                        const EngineParams& params = {});

}  // namespace gsmem
