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

#include "bevkit/scene_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bevkit/rng.hpp"

namespace bevkit {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// kingpin geometry for truck and semi-trailer pairs
constexpr double kFifthWheelFromTruckRear = 1.5;  // meters ahead of the rear face
constexpr double kKingpinFromTrailerFront = 1.6;  // meters behind the front face

struct SceneObject {
  std::string class_name;
  double width, length, height;
  double speed_mps = 0.0;
  Pose2 world_pose;  // center + heading
  int pair_index = -1;          // index of the partner object, or -1
  bool trailer = false;         // pose derived from the towing partner
  double articulation_rad = 0.0;
};

Pose2 trailer_pose_from_truck(const SceneObject& truck, const SceneObject& trailer) {
  const double kingpin_offset = -(truck.length / 2.0 - kFifthWheelFromTruckRear);
  const Vec2 kingpin =
      apply(truck.world_pose, Vec2{kingpin_offset, 0.0});
  const double trailer_yaw =
      normalize_angle(truck.world_pose.theta - trailer.articulation_rad);
  const Vec2 back =
      rotate(Vec2{-(trailer.length / 2.0 - kKingpinFromTrailerFront), 0.0}, trailer_yaw);
  return Pose2{kingpin.x + back.x, kingpin.y + back.y, trailer_yaw};
}

Box7 object_box_world(const SceneObject& obj) {
  return Box7(obj.world_pose.tx, obj.world_pose.ty, obj.height / 2.0, obj.width,
              obj.length, obj.height, obj.world_pose.theta);
}

bool overlaps_any(const Box7& box, const std::vector<SceneObject>& placed,
                  int exempt_index) {
  // inflate by a margin so nothing starts tangent
  Box7 inflated = box;
  inflated.width += 1.0;
  inflated.length += 1.0;
  for (std::size_t i = 0; i < placed.size(); ++i) {
    if (static_cast<int>(i) == exempt_index) continue;
    if (rotated_iou_bev(inflated, object_box_world(placed[i])) > 0.0) return true;
  }
  return false;
}

struct Projected {
  double u, v, depth;
};

std::optional<Projected> project_raw(const CameraModel& cam, double x, double y,
                                     double z) {
  const auto& r = cam.rotation;
  const auto& t = cam.translation;
  const double xc = r[0] * x + r[1] * y + r[2] * z + t[0];
  const double yc = r[3] * x + r[4] * y + r[5] * z + t[1];
  const double zc = r[6] * x + r[7] * y + r[8] * z + t[2];
  if (zc <= 0.1) return std::nullopt;
  return Projected{cam.cx + cam.fx * xc / zc, cam.cy + cam.fy * yc / zc, zc};
}

}  // namespace

std::vector<double> ray_footprint_hits(const Vec2& direction,
                                       const ConvexPolygon& footprint,
                                       double min_range, double max_range) {
  std::vector<double> hits;
  const std::size_t n = footprint.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = footprint.vertices[i];
    const Vec2& q = footprint.vertices[(i + 1) % n];
    const Vec2 edge = q - p;
    const double denom = cross(direction, edge);
    if (std::abs(denom) < 1e-12) continue;
    const double t = cross(p, edge) / denom;
    const double s = cross(p, direction) / denom;
    if (s < 0.0 || s > 1.0) continue;
    if (t < min_range || t > max_range) continue;
    bool duplicate = false;
    for (const double h : hits) {
      if (std::abs(h - t) < 1e-9) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) hits.push_back(t);
  }
  std::sort(hits.begin(), hits.end());
  return hits;
}

GeneratedScene generate_scene(const SceneSpec& spec) {
  Rng rng(spec.seed);
  GeneratedScene scene;

  // camera rig: at (0, 0, height) looking along +x
  CameraModel cam;
  cam.fx = spec.camera.fx_px;
  cam.fy = spec.camera.fy_px;
  cam.cx = spec.camera.image_width_px / 2.0;
  cam.cy = spec.camera.image_height_px / 2.0;
  cam.image_width = spec.camera.image_width_px;
  cam.image_height = spec.camera.image_height_px;
  cam.rotation = {0.0, -1.0, 0.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0};
  cam.translation = {0.0, spec.camera.height_m, 0.0};
  cam.shutter_time_s = spec.camera.shutter_offset_s;
  scene.camera = cam;

  // --- place objects ---
  std::vector<SceneObject> objects;
  auto place = [&](SceneObject obj) -> bool {
    for (int attempt = 0; attempt < 100; ++attempt) {
      obj.world_pose =
          Pose2{rng.uniform(spec.place_x_min_m, spec.place_x_max_m),
                rng.uniform(spec.place_y_min_m, spec.place_y_max_m),
                rng.uniform(-std::numbers::pi, std::numbers::pi)};
      if (!overlaps_any(object_box_world(obj), objects, -1)) {
        objects.push_back(obj);
        return true;
      }
    }
    return false;
  };

  for (int i = 0; i < spec.counts.cars; ++i) {
    SceneObject car{"car", rng.uniform(1.8, 2.0), rng.uniform(4.2, 4.9),
                    rng.uniform(1.4, 1.8), rng.uniform(0.0, 4.0)};
    place(car);
  }
  for (int i = 0; i < spec.counts.truck_trailer_pairs; ++i) {
    SceneObject truck{"truck", rng.uniform(2.4, 2.6), rng.uniform(6.0, 7.5),
                      rng.uniform(3.2, 4.0), rng.uniform(0.5, 3.0)};
    SceneObject trailer{"semi_trailer", 2.55, rng.uniform(10.0, 13.6), 4.0, 0.0};
    trailer.trailer = true;
    trailer.articulation_rad =
        rng.uniform(spec.articulation_min_rad, spec.articulation_max_rad);
    if (!place(truck)) continue;
    const int truck_index = static_cast<int>(objects.size()) - 1;
    trailer.world_pose = trailer_pose_from_truck(objects[truck_index], trailer);
    // trailers legitimately overlap their truck, nothing else
    if (overlaps_any(object_box_world(trailer), objects, truck_index)) {
      objects.pop_back();
      continue;
    }
    trailer.pair_index = truck_index;
    objects.push_back(trailer);
    objects[truck_index].pair_index = static_cast<int>(objects.size()) - 1;
  }
  for (int i = 0; i < spec.counts.pedestrians; ++i) {
    SceneObject ped{"pedestrian", 0.6, 0.6, rng.uniform(1.6, 1.9),
                    rng.uniform(0.5, 1.5)};
    place(ped);
  }
  for (int i = 0; i < spec.counts.cyclists; ++i) {
    SceneObject cyc{"cyclist", 0.6, 1.8, rng.uniform(1.6, 1.9), rng.uniform(2.0, 5.0)};
    place(cyc);
  }

  const double az_res = spec.lidar.azimuth_resolution_deg * kDegToRad;
  const int n_rays = static_cast<int>(std::round(2.0 * std::numbers::pi / az_res));

  // --- frames ---
  Pose2 ego{0.0, 0.0, 0.0};
  for (int f = 0; f < spec.n_frames; ++f) {
    const double timestamp = f * spec.frame_dt_s;
    if (f > 0) {
      // advance everything by one time step
      const double dt = spec.frame_dt_s;
      ego = compose(ego, Pose2{spec.ego_speed_mps * dt, 0.0,
                               spec.ego_yaw_rate_rps * dt});
      for (SceneObject& obj : objects) {
        if (obj.trailer) continue;
        const Vec2 step = rotate(Vec2{obj.speed_mps * dt, 0.0}, obj.world_pose.theta);
        obj.world_pose.tx += step.x;
        obj.world_pose.ty += step.y;
      }
      for (SceneObject& obj : objects) {
        if (!obj.trailer) continue;
        obj.world_pose = trailer_pose_from_truck(objects[obj.pair_index], obj);
      }
    }

    LabeledFrame frame;
    frame.frame_id = f;
    frame.timestamp_s = timestamp;
    frame.ego_pose = ego;
    frame.points = PointCloud::with_standard_columns();

    const Pose2 ego_from_world = inverse(ego);

    // labels and footprints in ego coordinates
    std::vector<ConvexPolygon> footprints;
    for (std::size_t i = 0; i < objects.size(); ++i) {
      const SceneObject& obj = objects[i];
      const Pose2 in_ego = compose(ego_from_world, obj.world_pose);
      FrameLabel label;
      label.object_id = static_cast<std::int64_t>(i);
      label.class_name = obj.class_name;
      if (obj.pair_index >= 0) label.pair_id = obj.pair_index;
      label.box = Box7(in_ego.tx, in_ego.ty, obj.height / 2.0, obj.width,
                       obj.length, obj.height, in_ego.theta);
      footprints.push_back(box_to_bev_polygon(label.box));
      frame.labels.push_back(std::move(label));
    }

    // scan
    for (int k = 0; k < n_rays; ++k) {
      const double az = k * az_res;
      const Vec2 dir{std::cos(az), std::sin(az)};
      if (spec.lidar.occlusion) {
        double best_t = spec.lidar.max_range_m;
        int best_obj = -1;
        for (std::size_t i = 0; i < objects.size(); ++i) {
          const auto hits = ray_footprint_hits(dir, footprints[i],
                                               spec.lidar.min_range_m,
                                               spec.lidar.max_range_m);
          if (!hits.empty() && hits.front() < best_t) {
            best_t = hits.front();
            best_obj = static_cast<int>(i);
          }
        }
        if (best_obj >= 0) {
          const SceneObject& obj = objects[best_obj];
          for (int e = 0; e < spec.lidar.elevation_samples; ++e) {
            const double z = (e + 0.5) * obj.height / spec.lidar.elevation_samples;
            frame.points.append_row({best_t * dir.x, best_t * dir.y, z, 0.5, 0.0,
                                     0.0, 0.0, 0.0});
          }
        }
      } else {
        for (std::size_t i = 0; i < objects.size(); ++i) {
          const SceneObject& obj = objects[i];
          for (const double t : ray_footprint_hits(dir, footprints[i],
                                                   spec.lidar.min_range_m,
                                                   spec.lidar.max_range_m)) {
            for (int e = 0; e < spec.lidar.elevation_samples; ++e) {
              const double z = (e + 0.5) * obj.height / spec.lidar.elevation_samples;
              frame.points.append_row({t * dir.x, t * dir.y, z, 0.5, 0.0,
                                       0.0, 0.0, 0.0});
            }
          }
        }
      }
    }

    // camera detections: projected corner boxes
    std::vector<Detection2D> cam_dets;
    for (const FrameLabel& label : frame.labels) {
      const ConvexPolygon fp = box_to_bev_polygon(label.box);
      double u_min = 1e30, u_max = -1e30, v_min = 1e30, v_max = -1e30;
      int visible = 0;
      for (const Vec2& corner : fp.vertices) {
        for (const double z : {0.0, label.box.height}) {
          const auto p = project_raw(cam, corner.x, corner.y, z);
          if (!p) continue;
          ++visible;
          u_min = std::min(u_min, p->u);
          u_max = std::max(u_max, p->u);
          v_min = std::min(v_min, p->v);
          v_max = std::max(v_max, p->v);
        }
      }
      if (visible < 2) continue;
      u_min = std::clamp(u_min, 0.0, static_cast<double>(cam.image_width));
      u_max = std::clamp(u_max, 0.0, static_cast<double>(cam.image_width));
      v_min = std::clamp(v_min, 0.0, static_cast<double>(cam.image_height));
      v_max = std::clamp(v_max, 0.0, static_cast<double>(cam.image_height));
      if (u_max - u_min < 2.0 || v_max - v_min < 2.0) continue;
      Detection2D det;
      det.u_min = u_min;
      det.v_min = v_min;
      det.u_max = u_max;
      det.v_max = v_max;
      det.group = (label.class_name == "pedestrian" || label.class_name == "cyclist")
                      ? kGroupVru
                      : kGroupVehicle;
      det.confidence = 0.7 + 0.3 * rng.uniform();
      if (label.box.cx > 0.1) det.depth_m = label.box.cx;
      cam_dets.push_back(std::move(det));
    }

    std::vector<EvalDetection> perfect;
    for (const FrameLabel& label : frame.labels) {
      perfect.push_back(
          EvalDetection{label.box, label.class_name, 0.6 + 0.4 * rng.uniform()});
    }

    scene.frames.push_back(std::move(frame));
    scene.camera_detections.push_back(std::move(cam_dets));
    scene.perfect_detections.push_back(std::move(perfect));
  }
  return scene;
}

}  // namespace bevkit
