// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/io/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gsmem {

namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "snapshot payload is written little-endian via raw stores");

constexpr char kMagic[8] = {'G', 'S', 'M', 'E', 'M', 'S', 'N', '1'};
constexpr const char* kFormat = "gsmem-snapshot/1";

json camera_to_json(const Camera& cam) {
  json j;
  j["fx"] = cam.k.fx;
  j["fy"] = cam.k.fy;
  j["cx"] = cam.k.cx;
  j["cy"] = cam.k.cy;
  j["width"] = cam.k.width;
  j["height"] = cam.k.height;
  j["r"] = std::vector<double>(cam.pose.r_cw.m, cam.pose.r_cw.m + 9);
  j["t"] = {cam.pose.t_cw.x, cam.pose.t_cw.y, cam.pose.t_cw.z};
  return j;
}

Camera camera_from_json(const json& j) {
  Camera cam;
  cam.k.fx = j.at("fx").get<double>();
  cam.k.fy = j.at("fy").get<double>();
  cam.k.cx = j.at("cx").get<double>();
  cam.k.cy = j.at("cy").get<double>();
  cam.k.width = j.at("width").get<int>();
  cam.k.height = j.at("height").get<int>();
  const std::vector<double> r = j.at("r").get<std::vector<double>>();
  if (r.size() != 9) throw std::runtime_error("camera rotation must have 9 entries");
  std::memcpy(cam.pose.r_cw.m, r.data(), sizeof cam.pose.r_cw.m);
  cam.pose.t_cw = {j.at("t").at(0).get<double>(), j.at("t").at(1).get<double>(),
                   j.at("t").at(2).get<double>()};
  return cam;
}

json vec3_to_json(const Vec3& v) { return {v.x, v.y, v.z}; }
Vec3 vec3_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

struct SectionWriter {
  std::vector<uint8_t> payload;
  json index = json::array();

  void add_f64(const std::string& name, const double* data, size_t count) {
    json entry;
    entry["name"] = name;
    entry["dtype"] = "f64";
    entry["offset"] = payload.size();
    entry["count"] = count;
    index.push_back(std::move(entry));
    const size_t bytes = count * sizeof(double);
    const size_t at = payload.size();
    payload.resize(at + bytes);
    std::memcpy(payload.data() + at, data, bytes);
  }

  void add_u8(const std::string& name, const uint8_t* data, size_t count) {
    json entry;
    entry["name"] = name;
    entry["dtype"] = "u8";
    entry["offset"] = payload.size();
    entry["count"] = count;
    index.push_back(std::move(entry));
    const size_t at = payload.size();
    payload.resize(at + count);
    std::memcpy(payload.data() + at, data, count);
  }
};

struct SectionReader {
  const std::vector<uint8_t>* payload = nullptr;
  const json* index = nullptr;

  const json* find(const std::string& name) const {
    for (const json& entry : *index)
      if (entry.at("name").get<std::string>() == name) return &entry;
    return nullptr;
  }

  std::vector<double> read_f64(const std::string& name) const {
    const json* entry = find(name);
    if (!entry) throw std::runtime_error("missing snapshot section: " + name);
    if (entry->at("dtype").get<std::string>() != "f64")
      throw std::runtime_error("section has wrong dtype: " + name);
    const size_t offset = entry->at("offset").get<size_t>();
    const size_t count = entry->at("count").get<size_t>();
    if (offset + count * sizeof(double) > payload->size())
      throw std::runtime_error("section overruns payload: " + name);
    std::vector<double> out(count);
    std::memcpy(out.data(), payload->data() + offset, count * sizeof(double));
    return out;
  }

  std::vector<uint8_t> read_u8(const std::string& name) const {
    const json* entry = find(name);
    if (!entry) throw std::runtime_error("missing snapshot section: " + name);
    if (entry->at("dtype").get<std::string>() != "u8")
      throw std::runtime_error("section has wrong dtype: " + name);
    const size_t offset = entry->at("offset").get<size_t>();
    const size_t count = entry->at("count").get<size_t>();
    if (offset + count > payload->size())
      throw std::runtime_error("section overruns payload: " + name);
    return {payload->begin() + offset, payload->begin() + offset + count};
  }
};

}  // namespace

void save_snapshot(const std::string& path, const EngineState& state,
                   const HarnessConfig& config) {
  const GaussianField& f = state.field;
  SectionWriter sections;
  sections.add_f64("positions", f.positions().data(), f.positions().size());
  sections.add_f64("log_scales", f.log_scales().data(), f.log_scales().size());
  sections.add_f64("rotations", f.rotations().data(), f.rotations().size());
  sections.add_f64("opacity_logits", f.opacity_logits().data(), f.opacity_logits().size());
  sections.add_f64("colors", f.colors().data(), f.colors().size());
  sections.add_f64("features", f.features().data(), f.features().size());
  sections.add_f64("feature_weights", f.feature_weights().data(), f.feature_weights().size());

  json manifest;
  manifest["format"] = kFormat;
  manifest["gaussians"] = f.size();
  manifest["feature_dim"] = f.feature_dim();

  // Scene graph.
  json nodes = json::array();
  for (const SceneGraphNode& n : state.graph.nodes()) {
    json jn;
    jn["id"] = n.id;
    jn["label"] = n.label;
    jn["bbox_min"] = vec3_to_json(n.bbox.min);
    jn["bbox_max"] = vec3_to_json(n.bbox.max);
    jn["best_confidence"] = n.best_confidence;
    jn["best_pose"] = camera_to_json(n.best_pose);
    jn["observation_count"] = n.observation_count;
    nodes.push_back(std::move(jn));
  }
  manifest["graph"] = {{"nodes", std::move(nodes)}, {"next_id", state.graph.next_id()}};

  // Keyframes: poses for all, images for the frames still in the window.
  json poses = json::array();
  for (const auto& [id, frame] : state.window.keyframes) {
    json jp;
    jp["id"] = id;
    jp["camera"] = camera_to_json(frame.camera);
    poses.push_back(std::move(jp));
  }
  manifest["keyframe_poses"] = std::move(poses);
  json window;
  window["window_size"] = state.window.window_size;
  window["last_keyframe_id"] = state.window.last_keyframe_id;
  window["order"] = state.window.window;
  json frames = json::array();
  for (uint64_t id : state.window.window) {
    const Keyframe& kf = state.window.keyframes.at(id);
    json jf;
    jf["id"] = id;
    jf["camera"] = camera_to_json(kf.camera);
    jf["width"] = kf.color.width;
    jf["height"] = kf.color.height;
    frames.push_back(std::move(jf));
    const std::string stem = "kf" + std::to_string(id);
    sections.add_f64(stem + "_color", kf.color.data.data(), kf.color.data.size());
    sections.add_f64(stem + "_depth", kf.depth.data.data(), kf.depth.data.size());
  }
  window["frames"] = std::move(frames);
  manifest["window"] = std::move(window);

  // Volumetric grids.
  if (state.tsdf) {
    json jt;
    jt["origin"] = vec3_to_json(state.tsdf->origin());
    jt["voxel_size"] = state.tsdf->voxel_size();
    jt["nx"] = state.tsdf->nx();
    jt["ny"] = state.tsdf->ny();
    jt["nz"] = state.tsdf->nz();
    manifest["tsdf"] = std::move(jt);
    sections.add_f64("tsdf_values", state.tsdf->values().data(), state.tsdf->values().size());
    sections.add_f64("tsdf_weights", state.tsdf->weights().data(),
                     state.tsdf->weights().size());
  } else {
    manifest["tsdf"] = nullptr;
  }
  {
    json jo;
    jo["origin"] = {state.occupancy.origin.x, state.occupancy.origin.y};
    jo["cell_size"] = state.occupancy.cell_size;
    jo["width"] = state.occupancy.width;
    jo["height"] = state.occupancy.height;
    manifest["occupancy"] = std::move(jo);
    static_assert(sizeof(CellState) == 1);
    sections.add_u8("occupancy_cells",
                    reinterpret_cast<const uint8_t*>(state.occupancy.cells.data()),
                    state.occupancy.cells.size());
  }
  manifest["collision_cells"] = state.collision_cells;

  {
    std::ostringstream rs;
    rs << state.rng;
    manifest["rng"] = rs.str();
  }
  manifest["config"] = json::parse(config_to_json(config));
  manifest["sections"] = std::move(sections.index);

  const std::string text = manifest.dump();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path);
  out.write(kMagic, sizeof kMagic);
  const uint64_t len = text.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(text.data(), (std::streamsize)text.size());
  out.write(reinterpret_cast<const char*>(sections.payload.data()),
            (std::streamsize)sections.payload.size());
  if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

LoadedSnapshot load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError(SnapshotError::Kind::missing, "snapshot not found: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string blob = buf.str();

  if (blob.size() < sizeof kMagic + sizeof(uint64_t))
    throw SnapshotError(SnapshotError::Kind::corrupt, "snapshot truncated: " + path);
  if (std::memcmp(blob.data(), kMagic, 7) != 0)
    throw SnapshotError(SnapshotError::Kind::corrupt, "not a memory snapshot: " + path);
  if (blob[7] != kMagic[7])
    throw SnapshotError(SnapshotError::Kind::version,
                        "snapshot was written by a newer format revision: " + path);

  uint64_t len = 0;
  std::memcpy(&len, blob.data() + sizeof kMagic, sizeof len);
  const size_t manifest_at = sizeof kMagic + sizeof len;
  if (manifest_at + len > blob.size())
    throw SnapshotError(SnapshotError::Kind::corrupt, "snapshot manifest truncated: " + path);

  json manifest;
  try {
    manifest = json::parse(blob.substr(manifest_at, len));
  } catch (const json::exception& e) {
    throw SnapshotError(SnapshotError::Kind::corrupt,
                        std::string("snapshot manifest is not valid JSON: ") + e.what());
  }

  try {
    const std::string format = manifest.at("format").get<std::string>();
    if (format != kFormat)
      throw SnapshotError(SnapshotError::Kind::version,
                          "unsupported snapshot format '" + format + "'");

    const std::vector<uint8_t> payload(blob.begin() + (long)(manifest_at + len), blob.end());
    const json& index = manifest.at("sections");
    SectionReader sections{&payload, &index};

    const int feature_dim = manifest.at("feature_dim").get<int>();
    const size_t n = manifest.at("gaussians").get<size_t>();

    LoadedSnapshot loaded{EngineState(feature_dim), HarnessConfig{}};
    EngineState& state = loaded.state;

    GaussianField& f = state.field;
    f.positions() = sections.read_f64("positions");
    f.log_scales() = sections.read_f64("log_scales");
    f.rotations() = sections.read_f64("rotations");
    f.opacity_logits() = sections.read_f64("opacity_logits");
    f.colors() = sections.read_f64("colors");
    f.features() = sections.read_f64("features");
    f.feature_weights() = sections.read_f64("feature_weights");
    if (f.size() != n || f.positions().size() != 3 * n || f.rotations().size() != 4 * n ||
        f.features().size() != (size_t)feature_dim * n)
      throw std::runtime_error("snapshot gaussian sections disagree about the count");

    // Scene graph.
    std::vector<SceneGraphNode> nodes;
    for (const json& jn : manifest.at("graph").at("nodes")) {
      SceneGraphNode node;
      node.id = jn.at("id").get<uint64_t>();
      node.label = jn.at("label").get<std::string>();
      node.bbox.min = vec3_from_json(jn.at("bbox_min"));
      node.bbox.max = vec3_from_json(jn.at("bbox_max"));
      node.best_confidence = jn.at("best_confidence").get<double>();
      node.best_pose = camera_from_json(jn.at("best_pose"));
      node.observation_count = jn.at("observation_count").get<int>();
      nodes.push_back(std::move(node));
    }
    state.graph.restore(std::move(nodes), manifest.at("graph").at("next_id").get<uint64_t>());

    // Window keyframes (the ones with stored images).
    const json& window = manifest.at("window");
    state.window.window_size = window.at("window_size").get<int>();
    state.window.last_keyframe_id = window.at("last_keyframe_id").get<uint64_t>();
    for (const json& jf : window.at("frames")) {
      Keyframe kf;
      kf.id = jf.at("id").get<uint64_t>();
      kf.camera = camera_from_json(jf.at("camera"));
      const int w = jf.at("width").get<int>();
      const int h = jf.at("height").get<int>();
      const std::string stem = "kf" + std::to_string(kf.id);
      kf.color = ImageF(w, h, 3);
      kf.color.data = sections.read_f64(stem + "_color");
      kf.depth = ImageF(w, h, 1);
      kf.depth.data = sections.read_f64(stem + "_depth");
      if (kf.color.data.size() != (size_t)w * h * 3 || kf.depth.data.size() != (size_t)w * h)
        throw std::runtime_error("keyframe image sections have the wrong size");
      state.window.keyframes.emplace(kf.id, std::move(kf));
    }
    for (const json& id : window.at("order"))
      state.window.window.push_back(id.get<uint64_t>());

    // Volumetric grids.
    if (!manifest.at("tsdf").is_null()) {
      const json& jt = manifest.at("tsdf");
      TsdfGrid tsdf(vec3_from_json(jt.at("origin")), jt.at("voxel_size").get<double>(),
                    jt.at("nx").get<int>(), jt.at("ny").get<int>(), jt.at("nz").get<int>());
      tsdf.values() = sections.read_f64("tsdf_values");
      tsdf.weights() = sections.read_f64("tsdf_weights");
      if (tsdf.values().size() != tsdf.voxel_count() ||
          tsdf.weights().size() != tsdf.voxel_count())
        throw std::runtime_error("tsdf sections have the wrong size");
      state.tsdf = std::move(tsdf);
    }
    {
      const json& jo = manifest.at("occupancy");
      state.occupancy =
          OccupancyGrid({jo.at("origin").at(0).get<double>(), jo.at("origin").at(1).get<double>()},
                        jo.at("cell_size").get<double>(), jo.at("width").get<int>(),
                        jo.at("height").get<int>());
      const std::vector<uint8_t> cells = sections.read_u8("occupancy_cells");
      if (cells.size() != state.occupancy.cells.size())
        throw std::runtime_error("occupancy section has the wrong size");
      for (size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] > 2) throw std::runtime_error("occupancy cell out of range");
        state.occupancy.cells[i] = (CellState)cells[i];
      }
    }
    for (const json& jc : manifest.at("collision_cells"))
      state.collision_cells.push_back({jc.at(0).get<int>(), jc.at(1).get<int>()});

    {
      std::istringstream rs(manifest.at("rng").get<std::string>());
      rs >> state.rng;
      if (!rs) throw std::runtime_error("snapshot rng state is malformed");
    }
    HarnessConfig config;
    apply_config_json(config, manifest.at("config").dump());
    loaded.config = config;
    return loaded;
  } catch (const SnapshotError&) {
    throw;
  } catch (const std::exception& e) {
    throw SnapshotError(SnapshotError::Kind::corrupt,
                        std::string("snapshot is corrupt: ") + e.what());
  }
}

}  // namespace gsmem
