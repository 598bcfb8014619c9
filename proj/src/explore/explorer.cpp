// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/explore/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gsmem/retrieval/viewpoint.hpp"
#include "gsmem/splat/fisher.hpp"
#include "gsmem/splat/rasterizer.hpp"

namespace gsmem {

namespace {

constexpr double kPi = std::numbers::pi;

// Sensing fan: three views so each stop covers a wide slice of the scene.
constexpr double kViewOffsets[3] = {-kPi / 3.0, 0.0, kPi / 3.0};

double clamp01(double v) {
  if (!std::isfinite(v)) return 0.0;
  return std::clamp(v, 0.0, 1.0);
}

// A compact fingerprint of everything the map knows; the progress guard only
// allows re-choosing the same frontier after this changes.
uint64_t map_signature(const EngineState& state) {
  uint64_t sig = mix_seed(state.field.size(), state.window.keyframes.size());
  sig = mix_seed(sig, state.graph.nodes().size());
  sig = mix_seed(sig, state.occupancy.count(CellState::free));
  sig = mix_seed(sig, state.occupancy.count(CellState::occupied));
  sig = mix_seed(sig, state.collision_cells.size());
  return sig;
}

// Grid used for motion planning: optimistic about unknown space (it is
// traversable until proven otherwise), pessimistic about remembered bumps,
// and always willing to start from the cell the agent stands on.
OccupancyGrid planning_grid(const EngineState& state,
                            std::optional<std::array<int, 2>> agent_cell) {
  OccupancyGrid grid = state.occupancy;
  for (CellState& c : grid.cells)
    if (c == CellState::unknown) c = CellState::free;
  for (const std::array<int, 2>& cell : state.collision_cells)
    if (grid.in_bounds(cell[0], cell[1])) grid.at(cell[0], cell[1]) = CellState::occupied;
  if (agent_cell && grid.in_bounds((*agent_cell)[0], (*agent_cell)[1]))
    grid.at((*agent_cell)[0], (*agent_cell)[1]) = CellState::free;
  return grid;
}

// The member cell of the cluster closest to its centroid; planning targets a
// concrete frontier cell, not the (possibly non-free) centroid cell.
std::array<int, 2> cluster_target_cell(const FrontierCluster& cluster,
                                       const OccupancyGrid& occ) {
  std::array<int, 2> best = cluster.cells.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (const std::array<int, 2>& cell : cluster.cells) {
    const Vec2 c = occ.cell_center(cell[0], cell[1]);
    const double d = (c - cluster.centroid).norm();
    if (d < best_d) {
      best_d = d;
      best = cell;
    }
  }
  return best;
}

// Walks the path with the world's kinematics. A refused step is remembered
// as a collision cell and truncates the walk.
void walk_path(SimWorld& world, EngineState& state,
               const std::vector<std::array<int, 2>>& path, StepRecord& rec) {
  for (size_t k = 1; k < path.size(); ++k) {
    if (!world.step_to(path[k])) {
      state.collision_cells.push_back(path[k]);
      rec.collision = true;
      return;
    }
    ++rec.cells_moved;
  }
}

std::vector<PosedRender> render_rois(const std::vector<RegionOfInterest>& rois,
                                     const GaussianField& field,
                                     const std::optional<TsdfGrid>& tsdf,
                                     const EngineParams& params) {
  std::vector<PosedRender> posed;
  for (const RegionOfInterest& roi : rois) {
    std::optional<Camera> opt_cam;
    if (tsdf) {
      const std::optional<ViewpointScore> best =
          select_optimal_view(roi, field, *tsdf, params.retrieval, params.raster);
      if (best) opt_cam = best->pose;
    }
    std::vector<RenderOutput> renders = render_roi_views(roi, field, opt_cam, params.raster);
    size_t idx = 0;
    if (opt_cam && idx < renders.size())
      posed.push_back({*opt_cam, std::move(renders[idx++])});
    if (roi.provenance == RoiProvenance::object && roi.best_pose && idx < renders.size())
      posed.push_back({*roi.best_pose, std::move(renders[idx++])});
  }
  return posed;
}

std::vector<RegionOfInterest> retrieve_rois(const EngineState& state,
                                            const std::string& question,
                                            const Oracle& oracle,
                                            const EmbeddingProvider& embedder,
                                            const EngineParams& params, int max_rois) {
  std::vector<RegionOfInterest> rois =
      retrieve_object_rois(state.graph, question, oracle, params.retrieval);
  const std::vector<double> query = embedder.embed_text(question);
  bool nonzero = false;
  for (double v : query) nonzero |= v != 0.0;
  if (nonzero) {
    std::vector<RegionOfInterest> sem =
        retrieve_semantic_rois(state.field, {query}, params.retrieval);
    rois.insert(rois.end(), std::make_move_iterator(sem.begin()),
                std::make_move_iterator(sem.end()));
  }
  if (max_rois >= 0 && (int)rois.size() > max_rois) rois.resize(max_rois);
  return rois;
}

}  // namespace

Camera frontier_approach_pose(const FrontierCluster& cluster, const SimWorld& world) {
  const double yaw = std::atan2(cluster.normal.y, cluster.normal.x);
  return world.camera_at(cluster.centroid, yaw);
}

double semantic_frontier_score(const Oracle& oracle, const std::string& question,
                               const Camera& pose, const ImageF& view) {
  return clamp01(oracle.score_frontier(question, pose, view));
}

double geometric_frontier_score(const GaussianField& field, const Camera& pose,
                                int width, int height, const RasterSettings& rs) {
  Camera reduced = pose;
  const double fov_x = 2.0 * std::atan(0.5 * pose.k.width / pose.k.fx);
  reduced.k = Intrinsics::from_fov(width, height, fov_x);
  return fisher_trace(field, reduced, rs);
}

int choose_frontier(const std::vector<FrontierCandidate>& candidates,
                    const ExplorerConfig& cfg) {
  if (candidates.empty()) return -1;
  int best_sem = 0, best_geo = 0;
  for (int i = 1; i < (int)candidates.size(); ++i) {
    if (candidates[i].s_sem > candidates[best_sem].s_sem) best_sem = i;
    if (candidates[i].s_geo > candidates[best_geo].s_geo) best_geo = i;
  }
  return candidates[best_sem].s_sem > cfg.tau_s ? best_sem : best_geo;
}

double path_length_m(const std::vector<std::array<int, 2>>& path, double cell_size) {
  double total = 0.0;
  for (size_t k = 1; k < path.size(); ++k) {
    const int dx = std::abs(path[k][0] - path[k - 1][0]);
    const int dy = std::abs(path[k][1] - path[k - 1][1]);
    total += (dx + dy == 2 ? std::numbers::sqrt2 : 1.0) * cell_size;
  }
  return total;
}

const char* outcome_name(EpisodeOutcome outcome) {
  switch (outcome) {
    case EpisodeOutcome::answered: return "answered";
    case EpisodeOutcome::exhausted: return "exhausted";
    case EpisodeOutcome::max_steps: return "max_steps";
    case EpisodeOutcome::coverage_reached: return "coverage_reached";
  }
  return "unknown";
}

EpisodeResult run_episode(SimWorld& world, EngineState& state, const std::string& question,
                          const Oracle& oracle, const EmbeddingProvider& embedder,
                          const EngineParams& params) {
  const ExplorerConfig& cfg = params.explorer;
  EpisodeResult result;
  const double traj0 = world.trajectory_length();
  if (!state.tsdf) state.tsdf = world.make_tsdf();

  // Progress guard memory for this episode.
  bool have_last = false;
  Vec2 last_centroid{0.0, 0.0};
  uint64_t last_sig = 0;

  for (int step = 1; step <= cfg.max_steps; ++step) {
    StepRecord rec;
    rec.step = step;
    rec.agent_xy = world.agent_xy();
    rec.agent_yaw = world.agent_yaw();

    // --- Sense: a three-view fan from the current pose.
    std::vector<Keyframe> views;
    views.reserve(3);
    for (double off : kViewOffsets) views.push_back(world.observe(off));

    // --- Map: keyframe gating + seeding, then a few optimizer iterations.
    std::vector<uint64_t> new_ids;
    for (const Keyframe& v : views) {
      if (maybe_insert_keyframe(state.field, v, state.window, params.flow_threshold,
                                params.raster, params.seeding)) {
        new_ids.push_back(state.window.last_keyframe_id);
        ++rec.keyframes_added;
      }
    }
    for (int it = 0; it < cfg.opt_steps && !state.window.empty(); ++it) {
      const StepResult sr =
          optimize_step(state.field, state.window, state.rng, params.optimizer, params.raster);
      rec.loss_rgb = sr.loss_rgb;
      rec.loss_depth = sr.loss_depth;
    }

    // --- Language: fold each new keyframe into the field exactly once.
    if (!new_ids.empty()) {
      std::vector<const Keyframe*> frames;
      for (uint64_t id : new_ids) frames.push_back(&state.window.keyframes.at(id));
      aggregate_features(state.field, frames, embedder, params.aggregation);
    }

    // --- Objects: detections from each view pose feed the graph.
    for (const Keyframe& v : views) {
      const std::vector<Detection> dets = world.detect_at(v.camera);
      rec.detections += (int)dets.size();
      state.graph.ingest(dets);
    }

    // --- Volume: depth into the TSDF, occupancy from its height slice.
    for (const Keyframe& v : views) state.tsdf->integrate_depth(v);
    state.occupancy = occupancy_from_tsdf(*state.tsdf, world.config().occ_cell,
                                          world.config().occ_z_lo, world.config().occ_z_hi);

    rec.gaussians = state.field.size();
    rec.graph_nodes = state.graph.nodes().size();
    rec.coverage = world.coverage(state.occupancy);

    // --- Answer attempt from rendered ROI views.
    if (!question.empty()) {
      const std::vector<RegionOfInterest> rois =
          retrieve_rois(state, question, oracle, embedder, params, cfg.max_rois);
      rec.rois = (int)rois.size();
      if (!rois.empty()) {
        const std::vector<PosedRender> posed =
            render_rois(rois, state.field, state.tsdf, params);
        if (!posed.empty()) {
          const OracleAnswer ans = oracle.answer_question(question, posed);
          if (ans.answered && ans.confidence >= cfg.answer_confidence_threshold) {
            rec.answered = true;
            rec.answer_confidence = ans.confidence;
            result.outcome = EpisodeOutcome::answered;
            result.answer = ans.answer;
            result.confidence = ans.confidence;
            result.steps = step;
            result.log.push_back(std::move(rec));
            result.trajectory_length = world.trajectory_length() - traj0;
            return result;
          }
        }
      }
    }

    if (cfg.stop_coverage > 0.0 && rec.coverage >= cfg.stop_coverage) {
      result.outcome = EpisodeOutcome::coverage_reached;
      result.steps = step;
      result.log.push_back(std::move(rec));
      result.trajectory_length = world.trajectory_length() - traj0;
      return result;
    }

    // --- Frontier selection and movement (skipped on the final step).
    if (step == cfg.max_steps) {
      result.steps = step;
      result.log.push_back(std::move(rec));
      break;
    }

    std::vector<FrontierCluster> clusters =
        extract_frontiers(state.occupancy, cfg.frontier_min_cluster);
    rec.frontiers = (int)clusters.size();

    std::vector<FrontierCandidate> candidates;
    candidates.reserve(clusters.size());
    for (FrontierCluster& cluster : clusters) {
      FrontierCandidate cand;
      cand.approach_pose = frontier_approach_pose(cluster, world);
      cand.cluster = std::move(cluster);
      if (cfg.policy == FrontierPolicy::hybrid) {
        ImageF view;
        if (cfg.score_on_live_view) {
          view = render_scene(world.scene(), cand.approach_pose).color;
        } else {
          view = rasterize(state.field, cand.approach_pose, params.raster).color;
        }
        cand.s_sem = semantic_frontier_score(oracle, question, cand.approach_pose, view);
        cand.s_geo = geometric_frontier_score(state.field, cand.approach_pose, cfg.geo_width,
                                              cfg.geo_height, params.raster);
        rec.s_sem.push_back(cand.s_sem);
        rec.s_geo.push_back(cand.s_geo);
      }
      candidates.push_back(std::move(cand));
    }

    const uint64_t sig = map_signature(state);
    std::vector<int> alive(candidates.size());
    for (size_t i = 0; i < alive.size(); ++i) alive[i] = (int)i;

    // The progress guard bans only the frontier chosen last time, and only
    // while the map fingerprint is unchanged.
    if (have_last && sig == last_sig) {
      std::erase_if(alive, [&](int i) {
        const Vec2 c = candidates[i].cluster.centroid;
        return c.x == last_centroid.x && c.y == last_centroid.y;
      });
    }

    bool moved = false;
    while (!alive.empty()) {
      int pick;  // position within `alive`
      if (cfg.policy == FrontierPolicy::uniform_random) {
        pick = (int)(state.rng() % alive.size());
      } else {
        std::vector<FrontierCandidate> subset;
        subset.reserve(alive.size());
        for (int i : alive) subset.push_back(candidates[i]);
        pick = choose_frontier(subset, cfg);
      }
      const int idx = alive[pick];
      const FrontierCandidate& cand = candidates[idx];

      const std::array<int, 2> target = cluster_target_cell(cand.cluster, state.occupancy);
      std::array<int, 2> from{-1, -1};
      int fx = 0, fy = 0;
      if (state.occupancy.cell_of(world.agent_xy(), &fx, &fy)) from = {fx, fy};
      const OccupancyGrid grid = planning_grid(state, from[0] >= 0
                                                          ? std::optional(from)
                                                          : std::nullopt);
      std::optional<std::vector<std::array<int, 2>>> path;
      if (from[0] >= 0) path = plan_path(grid, from, target);
      if (!path) {  // unreachable: drop this candidate and re-choose
        alive.erase(alive.begin() + pick);
        continue;
      }

      rec.chosen = idx;
      rec.semantic_branch = cfg.policy == FrontierPolicy::hybrid &&
                            cand.s_sem > cfg.tau_s;
      rec.target_centroid = cand.cluster.centroid;
      walk_path(world, state, *path, rec);
      if (!rec.collision) {
        // Face the unknown space the frontier borders.
        world.set_agent(world.agent_xy(),
                        std::atan2(cand.cluster.normal.y, cand.cluster.normal.x));
      }
      have_last = true;
      last_centroid = cand.cluster.centroid;
      last_sig = sig;
      moved = true;
      break;
    }

    result.steps = step;
    const bool out_of_frontiers = !moved;
    result.log.push_back(std::move(rec));
    if (out_of_frontiers) {
      result.outcome = EpisodeOutcome::exhausted;
      result.trajectory_length = world.trajectory_length() - traj0;
      return result;
    }
  }

  result.outcome = cfg.max_steps == 0 ? EpisodeOutcome::exhausted : EpisodeOutcome::max_steps;
  result.trajectory_length = world.trajectory_length() - traj0;
  return result;
}

QueryResult query_memory(const EngineState& state, const std::string& question,
                         const Oracle& oracle, const EmbeddingProvider& embedder,
                         const EngineParams& params) {
  QueryResult out;
  const std::vector<RegionOfInterest> rois =
      retrieve_rois(state, question, oracle, embedder, params, params.explorer.max_rois);
  out.rois = (int)rois.size();
  if (rois.empty()) return out;
  out.location = rois.front().bbox.centroid();
  const std::vector<PosedRender> posed = render_rois(rois, state.field, state.tsdf, params);
  if (posed.empty()) return out;
  const OracleAnswer ans = oracle.answer_question(question, posed);
  if (ans.answered && ans.confidence >= params.explorer.answer_confidence_threshold) {
    out.answered = true;
    out.answer = ans.answer;
    out.confidence = ans.confidence;
  }
  return out;
}

NavigationResult run_navigation_episode(SimWorld& world, EngineState& state,
                                        const std::string& goal, const Oracle& oracle,
                                        const EmbeddingProvider& embedder,
                                        const EngineParams& params) {
  NavigationResult nav;
  const double traj0 = world.trajectory_length();
  const Vec2 start_xy = world.agent_xy();

  // Ground-truth goal position: the (unique) scene object with this label.
  const std::string target = target_label(goal);
  bool have_goal = false;
  for (const SceneObject& obj : world.scene().objects) {
    if (canonical_label(obj.label) == target && !target.empty()) {
      nav.goal_xy = {obj.center.x, obj.center.y};
      have_goal = true;
      break;
    }
  }

  nav.episode = run_episode(world, state, goal, oracle, embedder, params);

  // Drive to the remembered location of the recognized object.
  if (nav.episode.outcome == EpisodeOutcome::answered) {
    const QueryResult memory = query_memory(state, goal, oracle, embedder, params);
    if (memory.location) {
      const Vec2 est{memory.location->x, memory.location->y};
      for (int attempt = 0; attempt < 50; ++attempt) {
        int ax = 0, ay = 0;
        if (!state.occupancy.cell_of(world.agent_xy(), &ax, &ay)) break;
        const OccupancyGrid grid = planning_grid(state, std::array<int, 2>{ax, ay});
        // Aim at the observed-free cell nearest the estimate; cells that are
        // merely unexplored may lie inside the object itself.
        std::array<int, 2> goal_cell{-1, -1};
        double best_d = std::numeric_limits<double>::infinity();
        for (int iy = 0; iy < grid.height; ++iy)
          for (int ix = 0; ix < grid.width; ++ix) {
            if (state.occupancy.at(ix, iy) != CellState::free) continue;
            const double d = (grid.cell_center(ix, iy) - est).norm();
            if (d < best_d) {
              best_d = d;
              goal_cell = {ix, iy};
            }
          }
        if (goal_cell[0] < 0) break;
        const std::optional<std::vector<std::array<int, 2>>> path =
            plan_path(grid, {ax, ay}, goal_cell);
        if (!path || path->size() < 2) break;
        StepRecord scratch;
        walk_path(world, state, *path, scratch);
        if (!scratch.collision) break;  // arrived as close as the map allows
      }
    }
  }

  nav.final_xy = world.agent_xy();
  nav.traveled_m = world.trajectory_length() - traj0;
  if (have_goal) {
    nav.success = (nav.final_xy - nav.goal_xy).norm() <= 1.0;

    // Shortest feasible path on the ground-truth grid, start cell to the
    // free cell nearest the goal.
    const OccupancyGrid& gt = world.gt_occupancy();
    int sx = 0, sy = 0;
    if (gt.cell_of(start_xy, &sx, &sy)) {
      std::array<int, 2> goal_cell{-1, -1};
      double best_d = std::numeric_limits<double>::infinity();
      for (int iy = 0; iy < gt.height; ++iy)
        for (int ix = 0; ix < gt.width; ++ix) {
          if (gt.at(ix, iy) != CellState::free) continue;
          const double d = (gt.cell_center(ix, iy) - nav.goal_xy).norm();
          if (d < best_d) {
            best_d = d;
            goal_cell = {ix, iy};
          }
        }
      if (goal_cell[0] >= 0) {
        const std::optional<std::vector<std::array<int, 2>>> shortest =
            plan_path(gt, {sx, sy}, goal_cell);
        if (shortest) nav.shortest_m = path_length_m(*shortest, gt.cell_size);
      }
    }
    if (nav.success) {
      nav.spl = nav.shortest_m <= 0.0
                    ? 1.0
                    : nav.shortest_m / std::max(nav.shortest_m, nav.traveled_m);
    }
  }
  return nav;
}

}  // namespace gsmem
