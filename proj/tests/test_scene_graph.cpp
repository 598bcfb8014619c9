// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <map>

#include "doctest.h"
#include "gsmem/core/rng.hpp"
#include "gsmem/map/scene_graph.hpp"

using namespace gsmem;

namespace {

Aabb box_at(const Vec3& center, double side = 0.4) {
  const Vec3 h{side * 0.5, side * 0.5, side * 0.5};
  return {center - h, center + h};
}

Detection det(const std::string& label, const Vec3& center, double conf,
              double pose_tag = 0.0, double side = 0.4) {
  Detection d;
  d.label = label;
  d.confidence = conf;
  d.bbox = box_at(center, side);
  d.observing_pose.pose.t_cw = {pose_tag, 0, 0};  // marker to identify the pose later
  return d;
}

}  // namespace

TEST_CASE("identical detections merge into one node") {
  SceneGraph g;
  g.ingest({det("chair", {1, 1, 0}, 0.7), det("chair", {1, 1, 0}, 0.6)});
  REQUIRE(g.nodes().size() == 1u);
  CHECK(g.nodes()[0].observation_count == 2);
  CHECK(g.nodes()[0].best_confidence == 0.7);
}

TEST_CASE("distance gate keeps far detections apart") {
  SceneGraph g;
  g.ingest({det("chair", {0, 0, 0}, 0.9), det("chair", {3, 0, 0}, 0.9)});
  CHECK(g.nodes().size() == 2u);
}

TEST_CASE("label and IoU gates both bind") {
  SceneGraph g;
  // Same spot, different label: two nodes.
  g.ingest({det("chair", {0, 0, 0}, 0.9), det("table", {0, 0, 0}, 0.9)});
  CHECK(g.nodes().size() == 2u);

  // Same label, centroids close, but small boxes that never overlap.
  SceneGraph g2;
  g2.ingest({det("mug", {0, 0, 0}, 0.5, 0.0, 0.2), det("mug", {0.3, 0, 0}, 0.5, 0.0, 0.2)});
  CHECK(g2.nodes().size() == 2u);
}

TEST_CASE("the best pose follows the highest-confidence detection") {
  SceneGraph g;
  g.ingest({det("lamp", {0, 0, 1}, 0.6, /*pose_tag=*/1.0)});
  g.ingest({det("lamp", {0, 0, 1}, 0.9, /*pose_tag=*/2.0)});
  g.ingest({det("lamp", {0, 0, 1}, 0.7, /*pose_tag=*/3.0)});
  REQUIRE(g.nodes().size() == 1u);
  CHECK(g.nodes()[0].best_confidence == 0.9);
  CHECK(g.nodes()[0].best_pose.pose.t_cw.x == 2.0);
  CHECK(g.nodes()[0].observation_count == 3);
}

TEST_CASE("merged boxes grow to the union") {
  SceneGraph g;
  g.ingest({det("sofa", {0, 0, 0}, 0.5), det("sofa", {0.2, 0, 0}, 0.5)});
  REQUIRE(g.nodes().size() == 1u);
  CHECK(g.nodes()[0].bbox.min.x == doctest::Approx(-0.2));
  CHECK(g.nodes()[0].bbox.max.x == doctest::Approx(0.4));
}

TEST_CASE("listing is deterministic and ordered by id") {
  SceneGraph g;
  CHECK(g.list_objects().empty());
  g.ingest({det("a", {0, 0, 0}, 0.5), det("b", {5, 0, 0}, 0.6), det("c", {10, 0, 0}, 0.7)});
  const auto objs = g.list_objects();
  REQUIRE(objs.size() == 3u);
  for (size_t i = 1; i < objs.size(); ++i) CHECK(objs[i - 1].id < objs[i].id);
  CHECK(objs[0].label == "a");
  CHECK(objs[2].centroid.x == doctest::Approx(10.0));
}

TEST_CASE("ingest order does not change unambiguous consolidations") {
  Rng rng(31);
  // Well-separated clusters with unique labels: matches can never chain.
  const int clusters = 6, per_cluster = 4;
  std::vector<Detection> dets;
  for (int c = 0; c < clusters; ++c) {
    const Vec3 center{5.0 * c, 0.0, 0.0};
    for (int j = 0; j < per_cluster; ++j) {
      const Vec3 jitter{uniform(rng, -0.05, 0.05), uniform(rng, -0.05, 0.05),
                        uniform(rng, -0.05, 0.05)};
      dets.push_back(det("obj" + std::to_string(c), center + jitter,
                         uniform(rng, 0.3, 1.0), 100.0 * c + j));
    }
  }

  auto summarize = [](const SceneGraph& g) {
    std::map<std::string, std::tuple<int, double, double, double>> by_label;
    for (const auto& n : g.nodes())
      by_label[n.label] = {n.observation_count, n.best_confidence, n.bbox.min.x,
                           n.bbox.max.x};
    return by_label;
  };

  SceneGraph in_order;
  in_order.ingest(dets);
  REQUIRE(in_order.nodes().size() == (size_t)clusters);

  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(dets.begin(), dets.end(), rng);
    SceneGraph shuffled;
    // Split across several ingest calls as well.
    const size_t half = dets.size() / 2;
    shuffled.ingest({dets.begin(), dets.begin() + half});
    shuffled.ingest({dets.begin() + half, dets.end()});
    CHECK(summarize(shuffled) == summarize(in_order));
  }
}

TEST_CASE("node count never exceeds detection count") {
  Rng rng(32);
  SceneGraph g;
  int total = 0;
  for (int round = 0; round < 10; ++round) {
    std::vector<Detection> dets;
    const int n = 1 + (int)(rng() % 7);
    for (int i = 0; i < n; ++i)
      dets.push_back(det("thing" + std::to_string(rng() % 3),
                         {uniform(rng, -2, 2), uniform(rng, -2, 2), 0.0},
                         uniform(rng, 0.0, 1.0)));
    total += n;
    g.ingest(dets);
    CHECK(g.nodes().size() <= (size_t)total);
  }
}
