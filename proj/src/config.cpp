// Copyright 2026 the bevkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bevkit/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const std::string& section) {
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown config key '" + section + "." + key + "'");
    }
  }
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void parse_anchor(const json& j, ToolkitConfig& cfg) {
  reject_unknown(j,
                 {"x_min_m", "x_max_m", "y_min_m", "y_max_m", "cell_size_m",
                  "yaw_slots_rad", "adaptive_yaw_slots_rad", "classes",
                  "positive_scale", "ignore_scale", "min_positive"},
                 "anchor");
  AnchorGridSpec& g = cfg.anchor_grid;
  maybe(j, "x_min_m", g.x_min_m);
  maybe(j, "x_max_m", g.x_max_m);
  maybe(j, "y_min_m", g.y_min_m);
  maybe(j, "y_max_m", g.y_max_m);
  maybe(j, "cell_size_m", g.cell_size_m);
  maybe(j, "yaw_slots_rad", g.yaw_slots_rad);
  maybe(j, "adaptive_yaw_slots_rad", cfg.adaptive_yaw_slots_rad);
  maybe(j, "positive_scale", cfg.ellipse.positive_scale);
  maybe(j, "ignore_scale", cfg.ellipse.ignore_scale);
  maybe(j, "min_positive", cfg.ellipse.min_positive);
  if (j.contains("classes")) {
    g.classes.clear();
    for (const json& c : j.at("classes")) {
      reject_unknown(c,
                     {"name", "width_m", "length_m", "height_m", "z_center_m",
                      "pos_iou", "neg_iou"},
                     "anchor.classes");
      ClassAnchorSpec spec;
      spec.name = c.at("name").get<std::string>();
      maybe(c, "width_m", spec.width_m);
      maybe(c, "length_m", spec.length_m);
      maybe(c, "height_m", spec.height_m);
      maybe(c, "z_center_m", spec.z_center_m);
      maybe(c, "pos_iou", spec.pos_iou);
      maybe(c, "neg_iou", spec.neg_iou);
      g.classes.push_back(std::move(spec));
    }
  }
}

void parse_heatmap(const json& j, ToolkitConfig& cfg) {
  reject_unknown(j,
                 {"cells_x", "cells_y", "cell_size_m", "x_min_m", "y_min_m",
                  "classes", "gaussian_scale", "mode", "min_sigma_cells",
                  "score_floor", "nms_kernel"},
                 "heatmap");
  HeatmapSpec& h = cfg.heatmap;
  maybe(j, "cells_x", h.cells_x);
  maybe(j, "cells_y", h.cells_y);
  maybe(j, "cell_size_m", h.cell_size_m);
  maybe(j, "x_min_m", h.x_min_m);
  maybe(j, "y_min_m", h.y_min_m);
  maybe(j, "classes", h.classes);
  maybe(j, "gaussian_scale", h.gaussian_scale);
  maybe(j, "min_sigma_cells", h.min_sigma_cells);
  maybe(j, "score_floor", cfg.heatmap_score_floor);
  maybe(j, "nms_kernel", cfg.heatmap_nms_kernel);
  if (j.contains("mode")) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "correlated") {
      h.mode = HeatmapMode::correlated;
    } else if (mode == "uncorrelated_baseline") {
      h.mode = HeatmapMode::uncorrelated_baseline;
    } else {
      throw ConfigError("heatmap.mode must be correlated or uncorrelated_baseline");
    }
  }
}

void parse_fusion(const json& j, ToolkitConfig& cfg) {
  reject_unknown(j, {"d_max", "metric", "append_depth"}, "fusion");
  maybe(j, "d_max", cfg.fusion.d_max);
  maybe(j, "append_depth", cfg.fusion.append_depth);
  if (j.contains("metric")) {
    const std::string metric = j.at("metric").get<std::string>();
    if (metric == "elliptic") {
      cfg.fusion.metric = FusionMetric::elliptic;
    } else if (metric == "chebyshev") {
      cfg.fusion.metric = FusionMetric::chebyshev;
    } else {
      throw ConfigError("fusion.metric must be elliptic or chebyshev");
    }
  }
}

void parse_temporal(const json& j, ToolkitConfig& cfg) {
  reject_unknown(j,
                 {"x_min_m", "y_min_m", "cell_size_m", "cells_x", "cells_y",
                  "max_points_per_pillar", "n_frames", "reducer"},
                 "temporal");
  PillarizeSpec& p = cfg.pillars;
  maybe(j, "x_min_m", p.x_min_m);
  maybe(j, "y_min_m", p.y_min_m);
  maybe(j, "cell_size_m", p.cell_size_m);
  maybe(j, "cells_x", p.cells_x);
  maybe(j, "cells_y", p.cells_y);
  maybe(j, "max_points_per_pillar", p.max_points_per_pillar);
  maybe(j, "n_frames", cfg.temporal_frames);
  maybe(j, "reducer", cfg.pillar_reducer);
  if (cfg.pillar_reducer != "mean" && cfg.pillar_reducer != "max") {
    throw ConfigError("temporal.reducer must be mean or max");
  }
}

void parse_augment(const json& j, ToolkitConfig& cfg) {
  reject_unknown(j,
                 {"samples_per_class", "collision_iou_threshold", "place_x_min_m",
                  "place_x_max_m", "place_y_min_m", "place_y_max_m", "max_retries",
                  "fading_epoch", "n_history", "crop_margin_m",
                  "use_original_pose"},
                 "augment");
  AugmentConfig& a = cfg.augment;
  if (j.contains("samples_per_class")) {
    a.samples_per_class.clear();
    for (const auto& [cls, n] : j.at("samples_per_class").items()) {
      a.samples_per_class[cls] = n.get<int>();
    }
  }
  maybe(j, "collision_iou_threshold", a.collision_iou_threshold);
  maybe(j, "place_x_min_m", a.place_x_min_m);
  maybe(j, "place_x_max_m", a.place_x_max_m);
  maybe(j, "place_y_min_m", a.place_y_min_m);
  maybe(j, "place_y_max_m", a.place_y_max_m);
  maybe(j, "max_retries", a.max_retries);
  maybe(j, "use_original_pose", a.use_original_pose);
  if (j.contains("fading_epoch") && !j.at("fading_epoch").is_null()) {
    a.fading_epoch = j.at("fading_epoch").get<int>();
  }
  maybe(j, "n_history", cfg.gtdb_history);
  maybe(j, "crop_margin_m", cfg.gtdb_crop_margin_m);
}

void parse_eval(const json& j, ToolkitConfig& cfg) {
  reject_unknown(j,
                 {"groups", "classes", "match_mode", "thresholds_m", "max_range_m",
                  "max_range_overrides_m", "min_points_auto_nlz"},
                 "eval");
  EvalConfig& e = cfg.eval;
  if (j.contains("groups")) {
    e.groups.clear();
    for (const auto& [group, members] : j.at("groups").items()) {
      e.groups[group] = members.get<std::vector<std::string>>();
    }
  }
  maybe(j, "classes", e.evaluated_classes);
  maybe(j, "thresholds_m", e.match_thresholds_m);
  maybe(j, "max_range_m", e.max_range_m);
  maybe(j, "min_points_auto_nlz", e.min_points_auto_nlz);
  if (j.contains("max_range_overrides_m")) {
    e.max_range_overrides_m.clear();
    for (const auto& [cls, r] : j.at("max_range_overrides_m").items()) {
      e.max_range_overrides_m[cls] = r.get<double>();
    }
  }
  if (j.contains("match_mode")) {
    const std::string mode = j.at("match_mode").get<std::string>();
    if (mode == "center_distance") {
      e.match_mode = MatchMode::center_distance;
    } else if (mode == "face_alignment") {
      e.match_mode = MatchMode::face_alignment;
    } else {
      throw ConfigError("eval.match_mode must be center_distance or face_alignment");
    }
  }
}

void parse_scene(const json& j, ToolkitConfig& cfg) {
  reject_unknown(j,
                 {"n_frames", "frame_dt_s", "ego_speed_mps", "ego_yaw_rate_rps",
                  "cars", "truck_trailer_pairs", "pedestrians", "cyclists",
                  "articulation_min_rad", "articulation_max_rad", "place_x_min_m",
                  "place_x_max_m", "place_y_min_m", "place_y_max_m",
                  "lidar_azimuth_resolution_deg", "lidar_max_range_m",
                  "lidar_elevation_samples", "lidar_occlusion"},
                 "scene");
  SceneSpec& s = cfg.scene;
  maybe(j, "n_frames", s.n_frames);
  maybe(j, "frame_dt_s", s.frame_dt_s);
  maybe(j, "ego_speed_mps", s.ego_speed_mps);
  maybe(j, "ego_yaw_rate_rps", s.ego_yaw_rate_rps);
  maybe(j, "cars", s.counts.cars);
  maybe(j, "truck_trailer_pairs", s.counts.truck_trailer_pairs);
  maybe(j, "pedestrians", s.counts.pedestrians);
  maybe(j, "cyclists", s.counts.cyclists);
  maybe(j, "articulation_min_rad", s.articulation_min_rad);
  maybe(j, "articulation_max_rad", s.articulation_max_rad);
  maybe(j, "place_x_min_m", s.place_x_min_m);
  maybe(j, "place_x_max_m", s.place_x_max_m);
  maybe(j, "place_y_min_m", s.place_y_min_m);
  maybe(j, "place_y_max_m", s.place_y_max_m);
  maybe(j, "lidar_azimuth_resolution_deg", s.lidar.azimuth_resolution_deg);
  maybe(j, "lidar_max_range_m", s.lidar.max_range_m);
  maybe(j, "lidar_elevation_samples", s.lidar.elevation_samples);
  maybe(j, "lidar_occlusion", s.lidar.occlusion);
}

}  // namespace

ToolkitConfig ToolkitConfig::defaults() {
  ToolkitConfig cfg;
  cfg.anchor_grid.classes = {
      {"car", 1.9, 4.6, 1.6, 0.8, 0.6, 0.45},
      {"truck", 2.5, 7.0, 3.5, 1.75, 0.6, 0.45},
      {"semi_trailer", 2.55, 12.0, 4.0, 2.0, 0.6, 0.45},
      {"pedestrian", 0.6, 0.6, 1.8, 0.9, 0.5, 0.35},
      {"cyclist", 0.6, 1.8, 1.8, 0.9, 0.5, 0.35},
  };
  cfg.heatmap.classes = {"car", "truck", "semi_trailer", "pedestrian", "cyclist"};
  cfg.augment.samples_per_class = {{"truck", 1}, {"car", 1}};
  cfg.eval = EvalConfig::defaults();
  return cfg;
}

ToolkitConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();

  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed config: ") + e.what(), path.string(), 0);
  }

  ToolkitConfig cfg = ToolkitConfig::defaults();
  reject_unknown(j, {"anchor", "heatmap", "fusion", "temporal", "augment", "eval",
                     "scene"},
                 "");
  if (j.contains("anchor")) parse_anchor(j.at("anchor"), cfg);
  if (j.contains("heatmap")) parse_heatmap(j.at("heatmap"), cfg);
  if (j.contains("fusion")) parse_fusion(j.at("fusion"), cfg);
  if (j.contains("temporal")) parse_temporal(j.at("temporal"), cfg);
  if (j.contains("augment")) parse_augment(j.at("augment"), cfg);
  if (j.contains("eval")) parse_eval(j.at("eval"), cfg);
  if (j.contains("scene")) parse_scene(j.at("scene"), cfg);
  return cfg;
}

}  // namespace bevkit
