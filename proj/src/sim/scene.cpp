// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/sim/scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gsmem {

namespace {

using nlohmann::json;

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json vec2_to_json(const Vec2& v) { return json::array({v.x, v.y}); }

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error("expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Vec2 vec2_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::runtime_error("expected a 2-element array");
  return {j[0].get<double>(), j[1].get<double>()};
}

json box_to_json(const Aabb& b) {
  return json{{"min", vec3_to_json(b.min)}, {"max", vec3_to_json(b.max)}};
}

Aabb box_from_json(const json& j) {
  return {vec3_from_json(j.at("min")), vec3_from_json(j.at("max"))};
}

// Nearest positive slab-method intersection with an axis-aligned box; when
// the origin is inside, the exit point counts as the hit surface.
bool hit_aabb(const Aabb& b, const Vec3& o, const Vec3& d, double* t_hit) {
  double t_enter = -1e300, t_exit = 1e300;
  const double os[3] = {o.x, o.y, o.z};
  const double ds[3] = {d.x, d.y, d.z};
  const double lo[3] = {b.min.x, b.min.y, b.min.z};
  const double hi[3] = {b.max.x, b.max.y, b.max.z};
  for (int a = 0; a < 3; ++a) {
    if (ds[a] == 0.0) {
      if (os[a] < lo[a] || os[a] > hi[a]) return false;
      continue;
    }
    double t0 = (lo[a] - os[a]) / ds[a];
    double t1 = (hi[a] - os[a]) / ds[a];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
    if (t_enter > t_exit) return false;
  }
  constexpr double kEps = 1e-9;
  if (t_enter > kEps) {
    *t_hit = t_enter;
    return true;
  }
  if (t_exit > kEps) {
    *t_hit = t_exit;
    return true;
  }
  return false;
}

bool hit_sphere(const Vec3& c, double r, const Vec3& o, const Vec3& d, double* t_hit) {
  const Vec3 oc = o - c;
  const double a = d.dot(d);
  const double b = 2.0 * d.dot(oc);
  const double k = oc.dot(oc) - r * r;
  const double disc = b * b - 4.0 * a * k;
  if (disc < 0.0) return false;
  const double s = std::sqrt(disc);
  constexpr double kEps = 1e-9;
  double t = (-b - s) / (2.0 * a);
  if (t <= kEps) t = (-b + s) / (2.0 * a);
  if (t <= kEps) return false;
  *t_hit = t;
  return true;
}

}  // namespace

void validate_scene(const SceneSpec& scene) {
  if (scene.bounds.is_empty()) throw std::runtime_error("scene bounds are empty");
  if (scene.agent_height <= 0.0) throw std::runtime_error("agent height must be positive");
  for (const SceneObject& obj : scene.objects) {
    if (obj.label.empty()) throw std::runtime_error("object with empty label");
    if (obj.shape == SceneObject::Shape::sphere) {
      if (obj.radius <= 0.0)
        throw std::runtime_error("sphere '" + obj.label + "' has non-positive radius");
    } else if (obj.size.x <= 0.0 || obj.size.y <= 0.0 || obj.size.z <= 0.0) {
      throw std::runtime_error("box '" + obj.label + "' has non-positive size");
    }
    bool inside = false;
    for (const Room& room : scene.rooms)
      if (room.interior.contains(obj.center)) {
        inside = true;
        break;
      }
    if (!inside)
      throw std::runtime_error("object '" + obj.label + "' lies in no room");
  }
}

std::string scene_to_json(const SceneSpec& scene) {
  json j;
  j["format"] = kSceneFormat;
  j["name"] = scene.name;
  j["seed"] = scene.seed;
  j["bounds"] = box_to_json(scene.bounds);
  j["agent"] = {{"start", vec2_to_json(scene.agent_start)},
                {"yaw", scene.agent_yaw},
                {"height", scene.agent_height}};
  j["rooms"] = json::array();
  for (const Room& r : scene.rooms)
    j["rooms"].push_back({{"name", r.name}, {"interior", box_to_json(r.interior)}});
  j["walls"] = json::array();
  for (const Aabb& w : scene.walls) j["walls"].push_back(box_to_json(w));
  j["objects"] = json::array();
  for (const SceneObject& o : scene.objects) {
    json jo;
    jo["shape"] = o.shape == SceneObject::Shape::sphere ? "sphere" : "box";
    jo["label"] = o.label;
    jo["tags"] = o.tags;
    jo["center"] = vec3_to_json(o.center);
    if (o.shape == SceneObject::Shape::sphere)
      jo["radius"] = o.radius;
    else
      jo["size"] = vec3_to_json(o.size);
    jo["color"] = vec3_to_json(o.color);
    j["objects"].push_back(std::move(jo));
  }
  return j.dump(2) + "\n";
}

SceneSpec parse_scene(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("scene file is not valid JSON: ") + e.what());
  }
  try {
    const std::string format = j.at("format").get<std::string>();
    if (format != kSceneFormat)
      throw std::runtime_error("unsupported scene format '" + format + "' (expected " +
                               kSceneFormat + ")");
    SceneSpec s;
    s.name = j.value("name", std::string("scene"));
    s.seed = j.value("seed", (uint64_t)0);
    s.bounds = box_from_json(j.at("bounds"));
    const json& agent = j.at("agent");
    s.agent_start = vec2_from_json(agent.at("start"));
    s.agent_yaw = agent.value("yaw", 0.0);
    s.agent_height = agent.value("height", 1.2);
    for (const json& jr : j.value("rooms", json::array()))
      s.rooms.push_back({jr.at("name").get<std::string>(), box_from_json(jr.at("interior"))});
    for (const json& jw : j.value("walls", json::array()))
      s.walls.push_back(box_from_json(jw));
    for (const json& jo : j.value("objects", json::array())) {
      SceneObject o;
      const std::string shape = jo.value("shape", std::string("box"));
      if (shape == "sphere")
        o.shape = SceneObject::Shape::sphere;
      else if (shape == "box")
        o.shape = SceneObject::Shape::box;
      else
        throw std::runtime_error("unknown object shape '" + shape + "'");
      o.label = jo.at("label").get<std::string>();
      o.tags = jo.value("tags", std::vector<std::string>{});
      o.center = vec3_from_json(jo.at("center"));
      if (o.shape == SceneObject::Shape::sphere)
        o.radius = jo.at("radius").get<double>();
      else
        o.size = vec3_from_json(jo.at("size"));
      o.color = vec3_from_json(jo.at("color"));
      s.objects.push_back(std::move(o));
    }
    validate_scene(s);
    return s;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed scene file: ") + e.what());
  }
}

SceneSpec load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scene file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

void save_scene(const SceneSpec& scene, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write scene file: " + path);
  out << scene_to_json(scene);
}

std::optional<SceneHit> raycast_scene(const SceneSpec& scene, const Vec3& origin,
                                      const Vec3& dir, double t_max) {
  SceneHit best;
  best.t = t_max;
  bool found = false;

  // Floor: the z = 0 plane inside the scene footprint.
  if (dir.z != 0.0) {
    const double t = -origin.z / dir.z;
    if (t > 1e-9 && t <= best.t) {
      const Vec3 p = origin + dir * t;
      if (p.x >= scene.bounds.min.x && p.x <= scene.bounds.max.x &&
          p.y >= scene.bounds.min.y && p.y <= scene.bounds.max.y) {
        best = {t, -1, kFloorColor};
        found = true;
      }
    }
  }

  double t = 0.0;
  for (const Aabb& wall : scene.walls) {
    if (hit_aabb(wall, origin, dir, &t) && t <= best.t) {
      best = {t, -1, kWallColor};
      found = true;
    }
  }
  for (size_t i = 0; i < scene.objects.size(); ++i) {
    const SceneObject& obj = scene.objects[i];
    const bool hit = obj.shape == SceneObject::Shape::sphere
                         ? hit_sphere(obj.center, obj.radius, origin, dir, &t)
                         : hit_aabb(obj.bounds(), origin, dir, &t);
    if (hit && t <= best.t) {
      best = {t, (int)i, obj.color};
      found = true;
    }
  }
  if (!found) return std::nullopt;
  return best;
}

GroundTruthRender render_scene(const SceneSpec& scene, const Camera& cam) {
  const int w = cam.k.width, h = cam.k.height;
  GroundTruthRender out;
  out.color = ImageF(w, h, 3);
  out.depth = ImageF(w, h, 1);
  out.instances.assign((size_t)w * h, -1);
  const Vec3 eye = cam.pose.position();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Vec3 dir = cam.ray_world((double)x, (double)y);
      const std::optional<SceneHit> hit = raycast_scene(scene, eye, dir);
      if (!hit) continue;
      out.color.at(0, y, x) = hit->color.x;
      out.color.at(1, y, x) = hit->color.y;
      out.color.at(2, y, x) = hit->color.z;
      // The ray parameter is metric z-depth because ray_world keeps the
      // camera-space z component at 1.
      if (hit->t <= kMaxSensorDepth) out.depth.at(0, y, x) = hit->t;
      out.instances[(size_t)y * w + x] = hit->object;
    }
  }
  return out;
}

Keyframe render_ground_truth(const SceneSpec& scene, const Camera& cam) {
  GroundTruthRender gt = render_scene(scene, cam);
  Keyframe kf;
  kf.camera = cam;
  kf.color = std::move(gt.color);
  kf.depth = std::move(gt.depth);
  return kf;
}

std::vector<int> render_instances(const SceneSpec& scene, const Camera& cam) {
  return render_scene(scene, cam).instances;
}

}  // namespace gsmem
