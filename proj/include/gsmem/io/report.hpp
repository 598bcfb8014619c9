// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "gsmem/explore/explorer.hpp"

namespace gsmem {

// Structured text (JSON) report for one episode: outcome totals followed by
// the full per-step log. `wall_seconds` is included only when >= 0, so
// deterministic reports simply omit it.
std::string episode_report_json(const EpisodeResult& episode, double wall_seconds = -1.0);

// Navigation report: success, SPL, path lengths, and the embedded episode.
std::string navigation_report_json(const NavigationResult& nav, double wall_seconds = -1.0);

// Query report: answer, confidence, ROI count, and the estimated location.
std::string query_report_json(const QueryResult& query);

// "step,coverage" CSV of the episode's coverage curve.
std::string coverage_csv(const EpisodeResult& episode);

// One benchmark row per scene.
struct BenchRow {
  std::string scene;
  std::string outcome;
  bool success = false;
  double spl = 0.0;
  int steps = 0;
  double traveled_m = 0.0;
};

// Fixed-width success-rate / SPL table over the corpus. Contains no
// timestamps or timings: two identical runs produce identical bytes.
std::string bench_report(const std::vector<BenchRow>& rows);

}  // namespace gsmem
