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

#pragma once

#include <filesystem>
#include <string>

#include "bevkit/anchors.hpp"
#include "bevkit/camera_fusion.hpp"
#include "bevkit/evaluation.hpp"
#include "bevkit/gt_database.hpp"
#include "bevkit/heatmap.hpp"
#include "bevkit/scene_gen.hpp"
#include "bevkit/temporal.hpp"

namespace bevkit {

/// Environment variable consulted for a default --config path.
inline constexpr const char* kConfigEnvVar = "BEVKIT_CONFIG";

/// Every module's configuration in one declarative file. Missing keys
/// keep their defaults.
struct ToolkitConfig {
  AnchorGridSpec anchor_grid;
  /// Yaw slots used when assignment runs in adaptive mode (the elliptical
  /// scheme regresses the heading, so one slot is the default).
  std::vector<double> adaptive_yaw_slots_rad = {0.0};
  ShapeEllipseParams ellipse;
  HeatmapSpec heatmap;
  double heatmap_score_floor = 0.3;
  int heatmap_nms_kernel = 3;
  FusionConfig fusion;
  PillarizeSpec pillars;
  int temporal_frames = 3;
  std::string pillar_reducer = "mean";  // or "max"
  AugmentConfig augment;
  int gtdb_history = 3;
  double gtdb_crop_margin_m = 0.0;
  EvalConfig eval;
  SceneSpec scene;

  static ToolkitConfig defaults();
};

/// Loads a config file and overlays it on the defaults. Unknown keys are
/// rejected as ConfigError so typos cannot silently fall back.
ToolkitConfig load_config(const std::filesystem::path& path);

}  // namespace bevkit
