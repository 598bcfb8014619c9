// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/io/report.hpp"

#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace gsmem {

namespace {

using nlohmann::json;

json step_to_json(const StepRecord& rec) {
  json j;
  j["step"] = rec.step;
  j["agent_xy"] = {rec.agent_xy.x, rec.agent_xy.y};
  j["agent_yaw"] = rec.agent_yaw;
  j["keyframes_added"] = rec.keyframes_added;
  j["gaussians"] = rec.gaussians;
  j["loss_rgb"] = rec.loss_rgb;
  j["loss_depth"] = rec.loss_depth;
  j["detections"] = rec.detections;
  j["graph_nodes"] = rec.graph_nodes;
  j["rois"] = rec.rois;
  j["answered"] = rec.answered;
  j["answer_confidence"] = rec.answer_confidence;
  j["frontiers"] = rec.frontiers;
  j["s_sem"] = rec.s_sem;
  j["s_geo"] = rec.s_geo;
  j["chosen"] = rec.chosen;
  j["semantic_branch"] = rec.semantic_branch;
  j["target_centroid"] = {rec.target_centroid.x, rec.target_centroid.y};
  j["cells_moved"] = rec.cells_moved;
  j["collision"] = rec.collision;
  j["coverage"] = rec.coverage;
  return j;
}

json episode_to_json(const EpisodeResult& episode, double wall_seconds) {
  json j;
  j["outcome"] = outcome_name(episode.outcome);
  j["success"] = episode.outcome == EpisodeOutcome::answered;
  j["answer"] = episode.answer;
  j["confidence"] = episode.confidence;
  j["steps"] = episode.steps;
  j["trajectory_length_m"] = episode.trajectory_length;
  if (wall_seconds >= 0.0) j["wall_seconds"] = wall_seconds;
  json log = json::array();
  for (const StepRecord& rec : episode.log) log.push_back(step_to_json(rec));
  j["log"] = std::move(log);
  return j;
}

}  // namespace

std::string episode_report_json(const EpisodeResult& episode, double wall_seconds) {
  return episode_to_json(episode, wall_seconds).dump(2) + "\n";
}

std::string navigation_report_json(const NavigationResult& nav, double wall_seconds) {
  json j;
  j["success"] = nav.success;
  j["spl"] = nav.spl;
  j["shortest_path_m"] = nav.shortest_m;
  j["traveled_m"] = nav.traveled_m;
  j["final_xy"] = {nav.final_xy.x, nav.final_xy.y};
  j["goal_xy"] = {nav.goal_xy.x, nav.goal_xy.y};
  j["episode"] = episode_to_json(nav.episode, -1.0);
  if (wall_seconds >= 0.0) j["wall_seconds"] = wall_seconds;
  return j.dump(2) + "\n";
}

std::string query_report_json(const QueryResult& query) {
  json j;
  j["answered"] = query.answered;
  j["answer"] = query.answer;
  j["confidence"] = query.confidence;
  j["rois"] = query.rois;
  if (query.location)
    j["location"] = {query.location->x, query.location->y, query.location->z};
  else
    j["location"] = nullptr;
  return j.dump(2) + "\n";
}

std::string coverage_csv(const EpisodeResult& episode) {
  std::ostringstream out;
  out << "step,coverage\n";
  char line[64];
  for (const StepRecord& rec : episode.log) {
    std::snprintf(line, sizeof line, "%d,%.6f\n", rec.step, rec.coverage);
    out << line;
  }
  return out.str();
}

std::string bench_report(const std::vector<BenchRow>& rows) {
  size_t name_w = 5;  // "scene"
  for (const BenchRow& row : rows) name_w = std::max(name_w, row.scene.size());

  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-*s  %-16s  %-7s  %8s  %5s  %10s\n", (int)name_w,
                "scene", "outcome", "success", "spl", "steps", "traveled_m");
  out << line;
  out << std::string(name_w + 2 + 16 + 2 + 7 + 2 + 8 + 2 + 5 + 2 + 10, '-') << "\n";

  int successes = 0;
  double spl_sum = 0.0;
  for (const BenchRow& row : rows) {
    std::snprintf(line, sizeof line, "%-*s  %-16s  %-7s  %8.4f  %5d  %10.3f\n", (int)name_w,
                  row.scene.c_str(), row.outcome.c_str(), row.success ? "yes" : "no", row.spl,
                  row.steps, row.traveled_m);
    out << line;
    successes += row.success ? 1 : 0;
    spl_sum += row.spl;
  }

  const size_t n = rows.size();
  const double sr = n ? (double)successes / (double)n : 0.0;
  const double mean_spl = n ? spl_sum / (double)n : 0.0;
  std::snprintf(line, sizeof line,
                "\nepisodes: %zu\nsuccess_rate: %.4f\nmean_spl: %.4f\n", n, sr, mean_spl);
  out << line;
  return out.str();
}

}  // namespace gsmem
