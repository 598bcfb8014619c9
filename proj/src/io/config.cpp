// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/io/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gsmem {

namespace {

using nlohmann::json;

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw std::runtime_error("config key '" + key + "' must be a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer())
    throw std::runtime_error("config key '" + key + "' must be an integer");
  return v.get<int>();
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw std::runtime_error("config key '" + key + "' must be a boolean");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw std::runtime_error("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

void apply_config_json(HarnessConfig& cfg, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::runtime_error("config root must be a JSON object");

  // Applied onto a copy so a rejected document leaves `cfg` untouched.
  HarnessConfig next = cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "tau_s") {
      next.params.explorer.tau_s = as_number(value, key);
      if (next.params.explorer.tau_s <= 0.0 || next.params.explorer.tau_s >= 1.0)
        throw std::runtime_error("config key 'tau_s' must lie strictly between 0 and 1");
    } else if (key == "k_obj") {
      next.params.retrieval.k_obj = as_int(value, key);
    } else if (key == "k_cluster") {
      next.params.retrieval.k_cluster = as_int(value, key);
    } else if (key == "tau_clip") {
      next.params.retrieval.tau_clip = as_number(value, key);
    } else if (key == "tau_d") {
      next.params.retrieval.tau_d = as_number(value, key);
    } else if (key == "min_cluster_size") {
      next.params.retrieval.min_cluster_size = as_int(value, key);
    } else if (key == "flow_threshold") {
      next.params.flow_threshold = as_number(value, key);
    } else if (key == "window_size") {
      next.window_size = as_int(value, key);
    } else if (key == "azimuth_step") {
      next.params.retrieval.azimuth_step_deg = as_number(value, key);
    } else if (key == "elevations") {
      if (!value.is_array()) throw std::runtime_error("config key 'elevations' must be an array");
      std::vector<double> elevations;
      for (const json& e : value) elevations.push_back(as_number(e, key));
      if (elevations.empty())
        throw std::runtime_error("config key 'elevations' must not be empty");
      next.params.retrieval.elevations_deg = std::move(elevations);
    } else if (key == "roi_view_width") {
      next.params.retrieval.view_width = as_int(value, key);
    } else if (key == "roi_view_height") {
      next.params.retrieval.view_height = as_int(value, key);
    } else if (key == "roi_view_fov_deg") {
      next.params.retrieval.view_fov_deg = as_number(value, key);
    } else if (key == "max_steps") {
      next.params.explorer.max_steps = as_int(value, key);
    } else if (key == "opt_steps") {
      next.params.explorer.opt_steps = as_int(value, key);
    } else if (key == "answer_confidence_threshold") {
      next.params.explorer.answer_confidence_threshold = as_number(value, key);
    } else if (key == "max_rois") {
      next.params.explorer.max_rois = as_int(value, key);
    } else if (key == "frontier_min_cluster") {
      next.params.explorer.frontier_min_cluster = as_int(value, key);
    } else if (key == "stop_coverage") {
      next.params.explorer.stop_coverage = as_number(value, key);
    } else if (key == "geo_width") {
      next.params.explorer.geo_width = as_int(value, key);
    } else if (key == "geo_height") {
      next.params.explorer.geo_height = as_int(value, key);
    } else if (key == "score_on_live_view") {
      next.params.explorer.score_on_live_view = as_bool(value, key);
    } else if (key == "policy") {
      const std::string p = as_string(value, key);
      if (p == "hybrid") {
        next.params.explorer.policy = FrontierPolicy::hybrid;
      } else if (p == "uniform_random") {
        next.params.explorer.policy = FrontierPolicy::uniform_random;
      } else {
        throw std::runtime_error("config key 'policy' must be 'hybrid' or 'uniform_random'");
      }
    } else if (key == "view_width") {
      next.world.view_width = as_int(value, key);
    } else if (key == "view_height") {
      next.world.view_height = as_int(value, key);
    } else if (key == "fov_deg") {
      next.world.fov_deg = as_number(value, key);
    } else if (key == "miss_rate") {
      next.world.detector.miss_rate = as_number(value, key);
    } else if (key == "corruption_rate") {
      next.world.detector.corruption_rate = as_number(value, key);
    } else if (key == "miss_label") {
      next.world.detector.miss_label = as_string(value, key);
    } else if (key == "lambda_depth") {
      next.params.optimizer.lambda_depth = as_number(value, key);
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !value.is_number_integer())
        throw std::runtime_error("config key 'seed' must be an integer");
      next.seed = value.get<uint64_t>();
    } else {
      throw std::runtime_error("unknown config key '" + key + "'");
    }
  }
}

void apply_config_file(HarnessConfig& cfg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_json(cfg, buf.str());
}

std::string config_to_json(const HarnessConfig& cfg) {
  json doc;
  doc["tau_s"] = cfg.params.explorer.tau_s;
  doc["k_obj"] = cfg.params.retrieval.k_obj;
  doc["k_cluster"] = cfg.params.retrieval.k_cluster;
  doc["tau_clip"] = cfg.params.retrieval.tau_clip;
  doc["tau_d"] = cfg.params.retrieval.tau_d;
  doc["min_cluster_size"] = cfg.params.retrieval.min_cluster_size;
  doc["flow_threshold"] = cfg.params.flow_threshold;
  doc["window_size"] = cfg.window_size;
  doc["azimuth_step"] = cfg.params.retrieval.azimuth_step_deg;
  doc["elevations"] = cfg.params.retrieval.elevations_deg;
  doc["roi_view_width"] = cfg.params.retrieval.view_width;
  doc["roi_view_height"] = cfg.params.retrieval.view_height;
  doc["roi_view_fov_deg"] = cfg.params.retrieval.view_fov_deg;
  doc["max_steps"] = cfg.params.explorer.max_steps;
  doc["opt_steps"] = cfg.params.explorer.opt_steps;
  doc["answer_confidence_threshold"] = cfg.params.explorer.answer_confidence_threshold;
  doc["max_rois"] = cfg.params.explorer.max_rois;
  doc["frontier_min_cluster"] = cfg.params.explorer.frontier_min_cluster;
  doc["stop_coverage"] = cfg.params.explorer.stop_coverage;
  doc["geo_width"] = cfg.params.explorer.geo_width;
  doc["geo_height"] = cfg.params.explorer.geo_height;
  doc["score_on_live_view"] = cfg.params.explorer.score_on_live_view;
  doc["policy"] =
      cfg.params.explorer.policy == FrontierPolicy::hybrid ? "hybrid" : "uniform_random";
  doc["view_width"] = cfg.world.view_width;
  doc["view_height"] = cfg.world.view_height;
  doc["fov_deg"] = cfg.world.fov_deg;
  doc["miss_rate"] = cfg.world.detector.miss_rate;
  doc["corruption_rate"] = cfg.world.detector.corruption_rate;
  doc["miss_label"] = cfg.world.detector.miss_label;
  doc["lambda_depth"] = cfg.params.optimizer.lambda_depth;
  doc["seed"] = cfg.seed;
  return doc.dump(2) + "\n";
}

}  // namespace gsmem
