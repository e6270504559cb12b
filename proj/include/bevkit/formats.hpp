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
#include <filesystem>
#include <string>
#include <vector>

#include "bevkit/anchors.hpp"
#include "bevkit/camera_fusion.hpp"
#include "bevkit/evaluation.hpp"
#include "bevkit/frame.hpp"
#include "bevkit/gt_database.hpp"
#include "bevkit/heatmap.hpp"
#include "bevkit/point_cloud.hpp"
#include "bevkit/temporal.hpp"

// On-disk formats. Binary files carry a magic/version header and store
// float32 little-endian payloads; structured data is line-delimited JSON
// with unit-suffixed field names. Every reader/writer pair round-trips
// byte-identically.

namespace bevkit {

// ---- point blob: 64-byte header + float32 rows -------------------------

void write_point_blob(const std::filesystem::path& path, const PointCloud& cloud);
PointCloud read_point_blob(const std::filesystem::path& path);

// ---- frame records (JSONL) ---------------------------------------------

struct FrameRecord {
  std::int64_t frame_id = 0;
  double timestamp_s = 0.0;
  Pose2 ego_pose;
  double ego_z_m = 0.0;       // reserved
  double ego_roll_rad = 0.0;  // reserved
  double ego_pitch_rad = 0.0; // reserved
  std::string point_blob;     // path relative to the record file
  std::vector<FrameLabel> labels;
  std::vector<NoLabelZone> zones;
  std::vector<std::string> camera_detection_files;
};

std::vector<FrameRecord> read_frame_records(const std::filesystem::path& path);
void write_frame_records(const std::filesystem::path& path,
                         const std::vector<FrameRecord>& records);

/// Loads the record's point blob (relative to base_dir) into a LabeledFrame.
LabeledFrame load_frame(const FrameRecord& record,
                        const std::filesystem::path& base_dir);

// ---- camera models and 2D detections ------------------------------------

std::vector<CameraModel> read_camera_models(const std::filesystem::path& path);
void write_camera_models(const std::filesystem::path& path,
                         const std::vector<CameraModel>& cameras);

std::vector<Detection2D> read_detections_2d(const std::filesystem::path& path);
void write_detections_2d(const std::filesystem::path& path,
                         const std::vector<Detection2D>& detections);

// ---- 3D detections (JSONL, frame-keyed) ----------------------------------

struct DetectionRecord {
  std::int64_t frame_id = 0;
  EvalDetection detection;
};

std::vector<DetectionRecord> read_detections_3d(const std::filesystem::path& path);
void write_detections_3d(const std::filesystem::path& path,
                         const std::vector<DetectionRecord>& detections);

// ---- evaluation report ----------------------------------------------------

void write_eval_report(const std::filesystem::path& path, const EvalReport& report);
void write_pr_curves_csv(const std::filesystem::path& path, const EvalReport& report);

// ---- ground truth database -------------------------------------------------

/// dir/index.json plus one point blob per entry (all steps concatenated
/// with a step column).
void write_gt_database(const std::filesystem::path& dir, const GtDatabase& db);
GtDatabase read_gt_database(const std::filesystem::path& dir);

// ---- anchor label raster + sparse targets -----------------------------------

void write_label_raster(const std::filesystem::path& path, const AnchorGridSpec& spec,
                        const AssignmentResult& result);

struct LabelRaster {
  std::uint32_t cells_x = 0;
  std::uint32_t cells_y = 0;
  std::uint32_t yaw_slots = 0;
  std::uint32_t classes = 0;
  double cell_size_m = 0.0;
  double x_min_m = 0.0;
  double y_min_m = 0.0;
  std::vector<std::uint8_t> labels;  // [class][slot][iy][ix]
};
LabelRaster read_label_raster(const std::filesystem::path& path);

void write_regression_targets(const std::filesystem::path& path,
                              const AnchorGridSpec& spec,
                              const AssignmentResult& result);

// ---- heatmap raster -----------------------------------------------------------

void write_heatmap_raster(const std::filesystem::path& path, const Heatmap& map);

struct HeatmapRaster {
  std::uint32_t cells_x = 0;
  std::uint32_t cells_y = 0;
  std::uint32_t classes = 0;
  double cell_size_m = 0.0;
  double x_min_m = 0.0;
  double y_min_m = 0.0;
  std::vector<float> scores;  // [class][iy][ix]
};
HeatmapRaster read_heatmap_raster(const std::filesystem::path& path);

// ---- stacked BEV grid tensor ---------------------------------------------------

void write_bev_grid(const std::filesystem::path& path, const BevGrid& grid);
BevGrid read_bev_grid(const std::filesystem::path& path);

// ---- grayscale image export ------------------------------------------------------

/// Binary PGM (P5), one byte per pixel.
void write_pgm(const std::filesystem::path& path, int width, int height,
               const std::vector<std::uint8_t>& pixels);

}  // namespace bevkit
