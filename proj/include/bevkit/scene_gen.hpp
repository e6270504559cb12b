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

#include <cstdint>
#include <string>
#include <vector>

#include "bevkit/camera_fusion.hpp"
#include "bevkit/evaluation.hpp"
#include "bevkit/frame.hpp"

namespace bevkit {

/// Horizontally scanning range sensor in the ego frame.
struct LidarModel {
  double azimuth_resolution_deg = 0.5;
  double min_range_m = 0.5;
  double max_range_m = 96.0;
  /// Vertical samples emitted per surface hit, spread over the object
  /// height.
  int elevation_samples = 8;
  bool occlusion = true;
};

struct SceneCounts {
  int cars = 2;
  int truck_trailer_pairs = 1;
  int pedestrians = 2;
  int cyclists = 1;
};

struct SceneCameraSpec {
  double fx_px = 500.0;
  double fy_px = 500.0;
  int image_width_px = 1280;
  int image_height_px = 800;
  double height_m = 1.5;          // above the ego plane, looking along +x
  double shutter_offset_s = 0.0;  // relative to the frame timestamp
};

/// Deterministic yard scene: a handful of moving objects, truck and
/// semi-trailer pairs articulating around the kingpin, a scanning sensor
/// and a forward camera. A fixed seed reproduces the byte stream exactly.
struct SceneSpec {
  int n_frames = 4;
  double frame_dt_s = 0.5;
  double ego_speed_mps = 2.0;
  double ego_yaw_rate_rps = 0.0;
  SceneCounts counts;
  double articulation_min_rad = -0.44;
  double articulation_max_rad = 0.44;
  double place_x_min_m = 8.0;
  double place_x_max_m = 40.0;
  double place_y_min_m = -18.0;
  double place_y_max_m = 18.0;
  LidarModel lidar;
  SceneCameraSpec camera;
  std::uint64_t seed = 0;
};

struct GeneratedScene {
  std::vector<LabeledFrame> frames;  // ego coordinates, oldest first
  CameraModel camera;
  /// Per frame, 2D boxes of the scene objects projected into the camera.
  std::vector<std::vector<Detection2D>> camera_detections;
  /// Per frame, one exact detection per label with seeded confidence.
  std::vector<std::vector<EvalDetection>> perfect_detections;
};

GeneratedScene generate_scene(const SceneSpec& spec);

/// Boundary hits of one ray against one convex footprint, nearest first.
/// Exposed for the generator's tests.
std::vector<double> ray_footprint_hits(const Vec2& direction,
                                       const ConvexPolygon& footprint,
                                       double min_range, double max_range);

}  // namespace bevkit
