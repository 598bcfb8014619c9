// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gsmem/explore/explorer.hpp"
#include "gsmem/io/config.hpp"
#include "gsmem/io/png.hpp"
#include "gsmem/io/report.hpp"
#include "gsmem/io/snapshot.hpp"
#include "gsmem/sim/oracle.hpp"
#include "gsmem/sim/sensors.hpp"
#include "gsmem/splat/rasterizer.hpp"

using namespace gsmem;

namespace {

namespace fs = std::filesystem;

// Fresh per-test scratch path under the system temp dir.
std::string scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gsmem_io_test";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), (std::streamsize)bytes.size());
  REQUIRE(out.good());
}

SceneSpec sofa_room() {
  SceneSpec s;
  s.name = "sofa-room";
  s.bounds = {{0, 0, 0}, {5, 4, 2.5}};
  s.rooms.push_back({"room", {{0.1, 0.1, 0}, {4.9, 3.9, 2.0}}});
  s.walls.push_back({{0, 0, 0}, {5, 0.1, 2.0}});
  s.walls.push_back({{0, 3.9, 0}, {5, 4, 2.0}});
  s.walls.push_back({{0, 0, 0}, {0.1, 4, 2.0}});
  s.walls.push_back({{4.9, 0, 0}, {5, 4, 2.0}});
  SceneObject sofa;
  sofa.shape = SceneObject::Shape::box;
  sofa.label = "sofa";
  sofa.tags = vocab_tags("sofa");
  sofa.center = {3.0, 2.0, 0.5};
  sofa.size = {1.0, 1.0, 1.0};
  sofa.color = {0.8, 0.2, 0.2};
  s.objects.push_back(sofa);
  s.agent_start = {1.0, 2.0};
  s.agent_yaw = 0.0;
  s.agent_height = 1.2;
  return s;
}

// A populated engine state: two exploration steps in the one-room scene.
struct LiveFixture {
  SceneSpec scene = sofa_room();
  WorldConfig wc;
  HarnessConfig config;
  SimWorld world;
  EngineState state;

  LiveFixture()
      : wc([] {
          WorldConfig w;
          w.view_width = 64;
          w.view_height = 64;
          return w;
        }()),
        world(scene, wc, 7) {
    config.world = wc;
    config.seed = 7;
    config.params.explorer.max_steps = 2;
    config.params.explorer.opt_steps = 2;
    config.params.explorer.geo_width = 32;
    config.params.explorer.geo_height = 32;
    state = EngineState(kFeatureDim, config.seed);
    ScriptedOracle oracle(scene);
    SimEmbedder embedder(scene);
    run_episode(world, state, "", oracle, embedder, config.params);
  }
};

bool render_equal(const RenderOutput& a, const RenderOutput& b) {
  return a.color.data == b.color.data && a.depth.data == b.depth.data &&
         a.alpha.data == b.alpha.data;
}

}  // namespace

TEST_CASE("config: defaults survive a serialize/apply round trip") {
  HarnessConfig defaults;
  const std::string text = config_to_json(defaults);
  HarnessConfig rebuilt;
  rebuilt.params.explorer.tau_s = 0.9;  // perturb, then restore from text
  rebuilt.params.retrieval.k_obj = 99;
  apply_config_json(rebuilt, text);
  CHECK(config_to_json(rebuilt) == text);
}

TEST_CASE("config: documented keys reach their fields") {
  HarnessConfig cfg;
  apply_config_json(cfg, R"({
    "tau_s": 0.55, "k_obj": 4, "k_cluster": 2, "tau_clip": 0.3, "tau_d": 0.2,
    "min_cluster_size": 15, "flow_threshold": 3.5, "window_size": 6,
    "azimuth_step": 30.0, "elevations": [0.0, 10.0],
    "roi_view_width": 128, "roi_view_height": 96, "roi_view_fov_deg": 60.0,
    "max_steps": 12, "opt_steps": 3, "answer_confidence_threshold": 0.1,
    "max_rois": 5, "frontier_min_cluster": 7, "stop_coverage": 0.8,
    "geo_width": 48, "geo_height": 40, "score_on_live_view": false,
    "policy": "uniform_random", "view_width": 96, "view_height": 80,
    "fov_deg": 75.0, "miss_rate": 0.25, "corruption_rate": 0.5,
    "miss_label": "sofa", "lambda_depth": 0.7, "seed": 42
  })");
  CHECK(cfg.params.explorer.tau_s == 0.55);
  CHECK(cfg.params.retrieval.k_obj == 4);
  CHECK(cfg.params.retrieval.k_cluster == 2);
  CHECK(cfg.params.retrieval.tau_clip == 0.3);
  CHECK(cfg.params.retrieval.tau_d == 0.2);
  CHECK(cfg.params.retrieval.min_cluster_size == 15);
  CHECK(cfg.params.flow_threshold == 3.5);
  CHECK(cfg.window_size == 6);
  CHECK(cfg.params.retrieval.azimuth_step_deg == 30.0);
  CHECK(cfg.params.retrieval.elevations_deg == std::vector<double>{0.0, 10.0});
  CHECK(cfg.params.retrieval.view_width == 128);
  CHECK(cfg.params.retrieval.view_height == 96);
  CHECK(cfg.params.retrieval.view_fov_deg == 60.0);
  CHECK(cfg.params.explorer.max_steps == 12);
  CHECK(cfg.params.explorer.opt_steps == 3);
  CHECK(cfg.params.explorer.answer_confidence_threshold == 0.1);
  CHECK(cfg.params.explorer.max_rois == 5);
  CHECK(cfg.params.explorer.frontier_min_cluster == 7);
  CHECK(cfg.params.explorer.stop_coverage == 0.8);
  CHECK(cfg.params.explorer.geo_width == 48);
  CHECK(cfg.params.explorer.geo_height == 40);
  CHECK(cfg.params.explorer.score_on_live_view == false);
  CHECK(cfg.params.explorer.policy == FrontierPolicy::uniform_random);
  CHECK(cfg.world.view_width == 96);
  CHECK(cfg.world.view_height == 80);
  CHECK(cfg.world.fov_deg == 75.0);
  CHECK(cfg.world.detector.miss_rate == 0.25);
  CHECK(cfg.world.detector.corruption_rate == 0.5);
  CHECK(cfg.world.detector.miss_label == "sofa");
  CHECK(cfg.params.optimizer.lambda_depth == 0.7);
  CHECK(cfg.seed == 42);
}

TEST_CASE("config: bad input is rejected with the offending key") {
  HarnessConfig cfg;
  CHECK_THROWS_WITH_AS(apply_config_json(cfg, R"({"no_such_key": 1})"),
                       doctest::Contains("no_such_key"), std::runtime_error);
  CHECK_THROWS_AS(apply_config_json(cfg, R"({"tau_s": 0.0})"), std::runtime_error);
  CHECK_THROWS_AS(apply_config_json(cfg, R"({"tau_s": 1.0})"), std::runtime_error);
  CHECK_THROWS_AS(apply_config_json(cfg, R"({"tau_s": "high"})"), std::runtime_error);
  CHECK_THROWS_AS(apply_config_json(cfg, R"({"elevations": 3})"), std::runtime_error);
  CHECK_THROWS_AS(apply_config_json(cfg, R"({"elevations": []})"), std::runtime_error);
  CHECK_THROWS_AS(apply_config_json(cfg, R"({"policy": "greedy"})"), std::runtime_error);
  CHECK_THROWS_AS(apply_config_json(cfg, R"({"k_obj": 2.5})"), std::runtime_error);
  CHECK_THROWS_AS(apply_config_json(cfg, R"([1, 2])"), std::runtime_error);
  CHECK_THROWS_AS(apply_config_json(cfg, "not json"), std::runtime_error);
  CHECK_THROWS_AS(apply_config_file(cfg, scratch("missing_config.json")),
                  std::runtime_error);
  // Nothing above may have mutated the config.
  CHECK(config_to_json(cfg) == config_to_json(HarnessConfig{}));
}

TEST_CASE("config: file application works") {
  const std::string path = scratch("cfg.json");
  spit(path, R"({"k_obj": 3, "seed": 9})");
  HarnessConfig cfg;
  apply_config_file(cfg, path);
  CHECK(cfg.params.retrieval.k_obj == 3);
  CHECK(cfg.seed == 9);
}

TEST_CASE("snapshot: round trip preserves the state bit for bit") {
  LiveFixture fx;
  REQUIRE(fx.state.field.size() > 0);
  REQUIRE(fx.state.graph.nodes().size() > 0);
  REQUIRE(fx.state.tsdf.has_value());
  REQUIRE(!fx.state.window.window.empty());

  const std::string path = scratch("roundtrip.snap");
  save_snapshot(path, fx.state, fx.config);
  LoadedSnapshot loaded = load_snapshot(path);

  // Field parameters.
  CHECK(loaded.state.field.size() == fx.state.field.size());
  CHECK(loaded.state.field.feature_dim() == fx.state.field.feature_dim());
  CHECK(loaded.state.field.positions() == fx.state.field.positions());
  CHECK(loaded.state.field.log_scales() == fx.state.field.log_scales());
  CHECK(loaded.state.field.rotations() == fx.state.field.rotations());
  CHECK(loaded.state.field.opacity_logits() == fx.state.field.opacity_logits());
  CHECK(loaded.state.field.colors() == fx.state.field.colors());
  CHECK(loaded.state.field.features() == fx.state.field.features());
  CHECK(loaded.state.field.feature_weights() == fx.state.field.feature_weights());

  // Renders from the loaded field are identical to renders from the live one.
  for (double yaw : {0.0, 1.2}) {
    const Camera cam = fx.world.agent_camera(yaw);
    CHECK(render_equal(rasterize(fx.state.field, cam), rasterize(loaded.state.field, cam)));
  }

  // Scene graph.
  REQUIRE(loaded.state.graph.nodes().size() == fx.state.graph.nodes().size());
  CHECK(loaded.state.graph.next_id() == fx.state.graph.next_id());
  for (size_t i = 0; i < fx.state.graph.nodes().size(); ++i) {
    const SceneGraphNode& a = fx.state.graph.nodes()[i];
    const SceneGraphNode& b = loaded.state.graph.nodes()[i];
    CHECK(a.id == b.id);
    CHECK(a.label == b.label);
    CHECK(a.bbox.min.x == b.bbox.min.x);
    CHECK(a.bbox.max.z == b.bbox.max.z);
    CHECK(a.best_confidence == b.best_confidence);
    CHECK(a.observation_count == b.observation_count);
    CHECK(a.best_pose.pose.t_cw.x == b.best_pose.pose.t_cw.x);
  }

  // Volumetric state.
  REQUIRE(loaded.state.tsdf.has_value());
  CHECK(loaded.state.tsdf->values() == fx.state.tsdf->values());
  CHECK(loaded.state.tsdf->weights() == fx.state.tsdf->weights());
  CHECK(loaded.state.tsdf->voxel_size() == fx.state.tsdf->voxel_size());
  CHECK(loaded.state.occupancy.cells == fx.state.occupancy.cells);
  CHECK(loaded.state.occupancy.origin.x == fx.state.occupancy.origin.x);
  CHECK(loaded.state.occupancy.cell_size == fx.state.occupancy.cell_size);
  CHECK(loaded.state.collision_cells == fx.state.collision_cells);

  // Window bookkeeping and the generator.
  CHECK(loaded.state.window.window == fx.state.window.window);
  CHECK(loaded.state.window.window_size == fx.state.window.window_size);
  CHECK(loaded.state.window.last_keyframe_id == fx.state.window.last_keyframe_id);
  CHECK(loaded.state.rng == fx.state.rng);
  CHECK(config_to_json(loaded.config) == config_to_json(fx.config));

  // Window keyframes keep their images, exactly.
  for (uint64_t id : fx.state.window.window) {
    const Keyframe& a = fx.state.window.keyframes.at(id);
    const Keyframe& b = loaded.state.window.keyframes.at(id);
    CHECK(a.color.data == b.color.data);
    CHECK(a.depth.data == b.depth.data);
    CHECK(a.camera.k.fx == b.camera.k.fx);
  }
  // And nothing image-less sneaks into the keyframe store.
  for (const auto& [id, kf] : loaded.state.window.keyframes)
    CHECK(kf.color.data.size() == (size_t)kf.color.width * kf.color.height * 3);

  // Saving the loaded state again reproduces the file byte for byte.
  const std::string path2 = scratch("roundtrip2.snap");
  save_snapshot(path2, loaded.state, loaded.config);
  CHECK(slurp(path2) == slurp(path));
}

TEST_CASE("snapshot: optimization resumes on a loaded state") {
  LiveFixture fx;
  const std::string path = scratch("resume.snap");
  save_snapshot(path, fx.state, fx.config);
  LoadedSnapshot loaded = load_snapshot(path);

  StepResult step = optimize_step(loaded.state.field, loaded.state.window, loaded.state.rng,
                                  fx.config.params.optimizer, fx.config.params.raster);
  CHECK(step.frames_used.size() >= 1);
  CHECK(std::isfinite(step.loss_rgb));
  CHECK(step.loss_rgb >= 0.0);
}

TEST_CASE("snapshot: load failures carry the right kind") {
  // Missing file.
  try {
    load_snapshot(scratch("does_not_exist.snap"));
    FAIL("expected SnapshotError");
  } catch (const SnapshotError& e) {
    CHECK(e.kind == SnapshotError::Kind::missing);
  }

  // A real snapshot to damage.
  EngineState tiny(kFeatureDim, 1);
  HarnessConfig config;
  const std::string good_path = scratch("good.snap");
  save_snapshot(good_path, tiny, config);
  const std::string good = slurp(good_path);

  // Truncated payload.
  const std::string trunc_path = scratch("trunc.snap");
  spit(trunc_path, good.substr(0, 20));
  try {
    load_snapshot(trunc_path);
    FAIL("expected SnapshotError");
  } catch (const SnapshotError& e) {
    CHECK(e.kind == SnapshotError::Kind::corrupt);
  }

  // Garbage magic.
  std::string garbage = good;
  garbage[0] = 'X';
  const std::string garbage_path = scratch("garbage.snap");
  spit(garbage_path, garbage);
  try {
    load_snapshot(garbage_path);
    FAIL("expected SnapshotError");
  } catch (const SnapshotError& e) {
    CHECK(e.kind == SnapshotError::Kind::corrupt);
  }

  // Damaged manifest bytes.
  std::string mangled = good;
  mangled[16] = '!';  // first manifest byte: '{' becomes '!'
  const std::string mangled_path = scratch("mangled.snap");
  spit(mangled_path, mangled);
  try {
    load_snapshot(mangled_path);
    FAIL("expected SnapshotError");
  } catch (const SnapshotError& e) {
    CHECK(e.kind == SnapshotError::Kind::corrupt);
  }

  // Future revision in the magic.
  std::string future = good;
  future[7] = '2';
  const std::string future_path = scratch("future.snap");
  spit(future_path, future);
  try {
    load_snapshot(future_path);
    FAIL("expected SnapshotError");
  } catch (const SnapshotError& e) {
    CHECK(e.kind == SnapshotError::Kind::version);
  }

  // Future revision declared in the manifest.
  const std::string manifest = R"({"format": "gsmem-snapshot/2"})";
  std::string doc;
  doc += "GSMEMSN1";
  uint64_t len = manifest.size();
  doc.append(reinterpret_cast<const char*>(&len), sizeof len);
  doc += manifest;
  const std::string manifest_path = scratch("manifest_future.snap");
  spit(manifest_path, doc);
  try {
    load_snapshot(manifest_path);
    FAIL("expected SnapshotError");
  } catch (const SnapshotError& e) {
    CHECK(e.kind == SnapshotError::Kind::version);
  }
}

TEST_CASE("png: writers emit real png files") {
  ImageF rgb(32, 16, 3);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 32; ++x) {
      rgb.at(0, y, x) = x / 31.0;
      rgb.at(1, y, x) = y / 15.0;
      rgb.at(2, y, x) = 1.5;  // clamps to full blue
    }
  const std::string rgb_path = scratch("test_rgb.png");
  write_png_rgb(rgb_path, rgb);

  ImageF gray(8, 8, 1);
  gray.fill(2.0);
  const std::string gray_path = scratch("test_gray.png");
  write_png_gray(gray_path, gray, 0.0, 4.0);

  const uint8_t signature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  for (const std::string& path : {rgb_path, gray_path}) {
    const std::string bytes = slurp(path);
    REQUIRE(bytes.size() > 8);
    CHECK(std::memcmp(bytes.data(), signature, 8) == 0);
  }
}

TEST_CASE("reports: episode json, coverage csv, bench table") {
  EpisodeResult ep;
  ep.outcome = EpisodeOutcome::answered;
  ep.answer = "sofa";
  ep.confidence = 0.5;
  ep.steps = 2;
  ep.trajectory_length = 1.25;
  StepRecord r1;
  r1.step = 1;
  r1.coverage = 0.25;
  StepRecord r2;
  r2.step = 2;
  r2.coverage = 0.5;
  r2.answered = true;
  ep.log = {r1, r2};

  const std::string with_wall = episode_report_json(ep, 3.5);
  const std::string without_wall = episode_report_json(ep);
  CHECK(with_wall.find("wall_seconds") != std::string::npos);
  CHECK(without_wall.find("wall_seconds") == std::string::npos);
  CHECK(without_wall.find("\"outcome\": \"answered\"") != std::string::npos);
  CHECK(episode_report_json(ep) == without_wall);  // deterministic

  CHECK(coverage_csv(ep) == "step,coverage\n1,0.250000\n2,0.500000\n");

  std::vector<BenchRow> rows = {{"scene_a", "answered", true, 0.8, 5, 12.5},
                                {"scene_b", "exhausted", false, 0.0, 9, 30.0}};
  const std::string table = bench_report(rows);
  CHECK(table == bench_report(rows));
  CHECK(table.find("success_rate: 0.5000") != std::string::npos);
  CHECK(table.find("mean_spl: 0.4000") != std::string::npos);
  CHECK(table.find("scene_a") != std::string::npos);
  CHECK(table.find("episodes: 2") != std::string::npos);
}
