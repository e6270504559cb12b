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
#include <optional>
#include <string>
#include <vector>

#include "bevkit/geometry.hpp"

namespace bevkit {

// Canonical column names. The first three columns of every cloud are
// x/y/z; the fusion columns are reserved at creation and filled in by the
// camera fusion stage.
inline constexpr const char* kColX = "x_m";
inline constexpr const char* kColY = "y_m";
inline constexpr const char* kColZ = "z_m";
inline constexpr const char* kColIntensity = "intensity";
inline constexpr const char* kColTimeOffset = "time_offset_s";
inline constexpr const char* kColDistVru = "cam_dist_vru";
inline constexpr const char* kColDistVehicle = "cam_dist_vehicle";
inline constexpr const char* kColCamDepth = "cam_depth_m";

/// Row-major table of per-point values. Columns are named; x, y, z are
/// always the first three. Mirrors the on-disk point blob layout (which
/// stores float32; in memory we keep double).
struct PointCloud {
  std::vector<std::string> columns;
  std::vector<double> data;  // size() * columns.size(), row-major

  static PointCloud with_standard_columns();

  std::size_t size() const {
    return columns.empty() ? 0 : data.size() / columns.size();
  }
  std::size_t column_count() const { return columns.size(); }

  std::optional<std::size_t> column_index(const std::string& name) const;

  double at(std::size_t row, std::size_t col) const {
    return data[row * columns.size() + col];
  }
  double& at(std::size_t row, std::size_t col) {
    return data[row * columns.size() + col];
  }

  double x(std::size_t row) const { return at(row, 0); }
  double y(std::size_t row) const { return at(row, 1); }
  double z(std::size_t row) const { return at(row, 2); }

  /// Appends one row; values must have column_count() entries.
  void append_row(const std::vector<double>& values);

  /// Extracts one coordinate column into a contiguous vector.
  std::vector<double> column(std::size_t col) const;
};

/// Rotates/translates the x and y columns in the ground plane; z and all
/// feature columns are untouched.
PointCloud transform_points(const PointCloud& cloud, const Pose2& pose);

/// Timestamped sweep with its ego pose (world frame).
struct PointCloudFrame {
  std::int64_t frame_id = 0;
  double timestamp_s = 0.0;
  Pose2 ego_pose;  // world <- ego
  PointCloud points;
};

}  // namespace bevkit
