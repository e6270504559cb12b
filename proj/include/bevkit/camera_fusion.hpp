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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bevkit/geometry.hpp"
#include "bevkit/point_cloud.hpp"

namespace bevkit {

/// Pinhole camera with a rigid sensor-frame-to-camera-frame extrinsic.
/// Camera frame convention: +z optical axis, +x right, +y down.
struct CameraModel {
  double fx = 0.0, fy = 0.0;
  double cx = 0.0, cy = 0.0;
  std::array<double, 9> rotation{};     // row-major, camera <- sensor
  std::array<double, 3> translation{};  // meters
  int image_width = 0;
  int image_height = 0;
  double shutter_time_s = 0.0;

  /// Rotation rows orthonormal within tol.
  bool rotation_orthonormal(double tol = 1e-9) const;
};

inline constexpr const char* kGroupVru = "vru";
inline constexpr const char* kGroupVehicle = "vehicle";

struct Detection2D {
  double u_min = 0.0, v_min = 0.0;
  double u_max = 0.0, v_max = 0.0;
  std::string group;  // kGroupVru or kGroupVehicle
  double confidence = 0.0;
  std::optional<double> depth_m;

  double center_u() const { return 0.5 * (u_min + u_max); }
  double center_v() const { return 0.5 * (v_min + v_max); }
  double width() const { return u_max - u_min; }
  double height() const { return v_max - v_min; }
};

struct PixelPoint {
  double u = 0.0;
  double v = 0.0;
};

/// Advances a sensor-frame point to the camera shutter time by the scaled
/// planar twist, applies the extrinsics and projects. Returns nullopt for
/// points behind the camera (z <= 0.1 m) or outside the image.
std::optional<PixelPoint> project_point(double x, double y, double z,
                                        const CameraModel& model,
                                        const Pose2& ego_motion_per_s, double dt_s);

enum class FusionMetric { elliptic, chebyshev };

/// Distance from a pixel to one detection, normalized by the box half
/// extents. 0 at the box center, exactly 1 at an edge midpoint.
double normalized_box_distance(const PixelPoint& px, const Detection2D& det,
                               FusionMetric metric = FusionMetric::elliptic);

/// Minimum normalized distance over the detections; ties keep the lower
/// index. Returns nullopt for an empty list.
struct NearestBox {
  double distance = 0.0;
  std::size_t index = 0;
};
std::optional<NearestBox> distance_to_nearest_box(
    const PixelPoint& px, const std::vector<Detection2D>& detections,
    FusionMetric metric = FusionMetric::elliptic);

struct FusionConfig {
  /// Saturation value; also the column value for points that are not
  /// visible in any camera or have no detection to relate to.
  double d_max = 4.0;
  FusionMetric metric = FusionMetric::elliptic;
  bool append_depth = true;
};

/// Per-point fusion output: one column per category group plus the
/// optional camera depth column (0 when no matched detection carries one).
struct FusionColumns {
  std::vector<double> dist_vru;
  std::vector<double> dist_vehicle;
  std::vector<double> depth_m;
};

/// Computes the normalized camera-distance columns for every point of the
/// frame across all cameras. detections_per_camera must have one entry
/// per camera (ConfigError otherwise). ego_motion_per_s is the planar
/// twist used to advance points to each camera's shutter time.
FusionColumns annotate_frame(const PointCloudFrame& frame,
                             const std::vector<CameraModel>& cameras,
                             const std::vector<std::vector<Detection2D>>& detections_per_camera,
                             const Pose2& ego_motion_per_s,
                             const FusionConfig& config);

/// Writes fusion columns into the cloud's reserved columns in place.
void apply_fusion_columns(PointCloud& cloud, const FusionColumns& columns);

}  // namespace bevkit
