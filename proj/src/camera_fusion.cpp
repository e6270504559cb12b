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

#include "bevkit/camera_fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {
constexpr double kMinCameraDepth = 0.1;  // meters in front of the lens
}

bool CameraModel::rotation_orthonormal(double tol) const {
  // R * R^T == I
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += rotation[i * 3 + k] * rotation[j * 3 + k];
      const double expect = (i == j) ? 1.0 : 0.0;
      if (std::abs(dot - expect) > tol) return false;
    }
  }
  return true;
}

std::optional<PixelPoint> project_point(double x, double y, double z,
                                        const CameraModel& model,
                                        const Pose2& ego_motion_per_s, double dt_s) {
  const Pose2 advance = scale_twist(ego_motion_per_s, dt_s);
  const Vec2 moved = apply(advance, Vec2{x, y});

  const double px = moved.x;
  const double py = moved.y;
  const auto& r = model.rotation;
  const auto& t = model.translation;
  const double xc = r[0] * px + r[1] * py + r[2] * z + t[0];
  const double yc = r[3] * px + r[4] * py + r[5] * z + t[1];
  const double zc = r[6] * px + r[7] * py + r[8] * z + t[2];
  if (zc <= kMinCameraDepth) return std::nullopt;

  const double u = model.cx + model.fx * xc / zc;
  const double v = model.cy + model.fy * yc / zc;
  if (u < 0.0 || u >= model.image_width || v < 0.0 || v >= model.image_height) {
    return std::nullopt;
  }
  return PixelPoint{u, v};
}

double normalized_box_distance(const PixelPoint& px, const Detection2D& det,
                               FusionMetric metric) {
  const double ru = 2.0 * (px.u - det.center_u()) / det.width();
  const double rv = 2.0 * (px.v - det.center_v()) / det.height();
  if (metric == FusionMetric::chebyshev) {
    return std::max(std::abs(ru), std::abs(rv));
  }
  return std::sqrt(ru * ru + rv * rv);
}

std::optional<NearestBox> distance_to_nearest_box(
    const PixelPoint& px, const std::vector<Detection2D>& detections,
    FusionMetric metric) {
  if (detections.empty()) return std::nullopt;
  NearestBox best{normalized_box_distance(px, detections[0], metric), 0};
  for (std::size_t i = 1; i < detections.size(); ++i) {
    const double d = normalized_box_distance(px, detections[i], metric);
    if (d < best.distance) best = NearestBox{d, i};
  }
  return best;
}

FusionColumns annotate_frame(const PointCloudFrame& frame,
                             const std::vector<CameraModel>& cameras,
                             const std::vector<std::vector<Detection2D>>& detections_per_camera,
                             const Pose2& ego_motion_per_s,
                             const FusionConfig& config) {
  if (cameras.size() != detections_per_camera.size()) {
    throw ConfigError("annotate_frame: camera count != detection list count");
  }

  const std::size_t n = frame.points.size();
  FusionColumns out;
  out.dist_vru.assign(n, config.d_max);
  out.dist_vehicle.assign(n, config.d_max);
  if (config.append_depth) out.depth_m.assign(n, 0.0);

  // Split each camera's detections once per group.
  std::vector<std::vector<Detection2D>> vru_dets(cameras.size());
  std::vector<std::vector<Detection2D>> vehicle_dets(cameras.size());
  for (std::size_t c = 0; c < cameras.size(); ++c) {
    for (const Detection2D& d : detections_per_camera[c]) {
      (d.group == kGroupVru ? vru_dets[c] : vehicle_dets[c]).push_back(d);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    double best_overall = std::numeric_limits<double>::infinity();
    std::optional<double> best_depth;
    for (std::size_t c = 0; c < cameras.size(); ++c) {
      const double dt = cameras[c].shutter_time_s - frame.timestamp_s;
      const auto px = project_point(frame.points.x(i), frame.points.y(i),
                                    frame.points.z(i), cameras[c],
                                    ego_motion_per_s, dt);
      if (!px) continue;
      if (const auto near = distance_to_nearest_box(*px, vru_dets[c], config.metric)) {
        out.dist_vru[i] = std::min(out.dist_vru[i], std::min(near->distance, config.d_max));
        if (near->distance < best_overall) {
          best_overall = near->distance;
          best_depth = vru_dets[c][near->index].depth_m;
        }
      }
      if (const auto near = distance_to_nearest_box(*px, vehicle_dets[c], config.metric)) {
        out.dist_vehicle[i] =
            std::min(out.dist_vehicle[i], std::min(near->distance, config.d_max));
        if (near->distance < best_overall) {
          best_overall = near->distance;
          best_depth = vehicle_dets[c][near->index].depth_m;
        }
      }
    }
    if (config.append_depth && best_depth) out.depth_m[i] = *best_depth;
  }
  return out;
}

void apply_fusion_columns(PointCloud& cloud, const FusionColumns& columns) {
  const auto vru = cloud.column_index(kColDistVru);
  const auto veh = cloud.column_index(kColDistVehicle);
  const auto dep = cloud.column_index(kColCamDepth);
  if (!vru || !veh) {
    throw ConfigError("apply_fusion_columns: cloud lacks reserved fusion columns");
  }
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    cloud.at(i, *vru) = columns.dist_vru[i];
    cloud.at(i, *veh) = columns.dist_vehicle[i];
    if (dep && !columns.depth_m.empty()) cloud.at(i, *dep) = columns.depth_m[i];
  }
}

}  // namespace bevkit
