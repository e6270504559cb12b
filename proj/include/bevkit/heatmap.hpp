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
#include <map>
#include <string>
#include <vector>

#include "bevkit/anchors.hpp"
#include "bevkit/geometry.hpp"

namespace bevkit {

enum class HeatmapMode { uncorrelated_baseline, correlated };

struct HeatmapSpec {
  int cells_x = 480;
  int cells_y = 480;
  double cell_size_m = 0.2;
  double x_min_m = -48.0;
  double y_min_m = -48.0;
  std::vector<std::string> classes;
  /// Fraction of (length, width) used as the Gaussian standard deviations.
  double gaussian_scale = 1.0 / 6.0;
  HeatmapMode mode = HeatmapMode::correlated;
  /// Lower bound on either standard deviation, in cells.
  double min_sigma_cells = 0.5;

  double cell_center_x(int ix) const { return x_min_m + (ix + 0.5) * cell_size_m; }
  double cell_center_y(int iy) const { return y_min_m + (iy + 0.5) * cell_size_m; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(cells_x) * cells_y;
  }
  int class_index(const std::string& name) const;
};

/// Center annotation stored at the peak cell: sub-cell offset in cells
/// plus everything needed to reconstruct the box.
struct PeakRecord {
  std::int64_t object_id = -1;
  double score = 0.0;
  double offset_x_cells = 0.0;
  double offset_y_cells = 0.0;
  double z_m = 0.0;
  double width_m = 0.0;
  double length_m = 0.0;
  double height_m = 0.0;
  double sin_yaw = 0.0;
  double cos_yaw = 1.0;
};

struct SkippedBox {
  std::int64_t object_id = -1;
  std::string reason;
};

struct Heatmap {
  HeatmapSpec spec;
  /// Per class, row-major [iy * cells_x + ix] scores in [0, 1].
  std::vector<std::vector<double>> channels;
  /// Peak payloads keyed by class_idx * cell_count + cell.
  std::map<std::size_t, PeakRecord> peaks;
  std::vector<SkippedBox> skipped;
};

/// Standard deviations for a box under the given spec: scaled (length,
/// width) in correlated mode, the scaled geometric mean of both in the
/// isotropic baseline, both floored at min_sigma_cells.
struct GaussianSigmas {
  double along_m = 0.0;
  double across_m = 0.0;
};
GaussianSigmas heatmap_sigmas(const Box7& box, const HeatmapSpec& spec);

/// Adds one rotated Gaussian to a score raster by per-cell maximum.
/// Contributions beyond Mahalanobis radius 3 are left at zero. The raster
/// must have spec.cell_count() entries.
void render_correlated_gaussian(const Box7& box, const HeatmapSpec& spec,
                                std::vector<double>& raster);

/// Isotropic variant: one shared standard deviation from the footprint's
/// geometric mean, so rotation of the box cannot change the raster.
void render_uncorrelated_baseline(const Box7& box, const HeatmapSpec& spec,
                                  std::vector<double>& raster);

/// Renders all ground truths into per-class channels, forces every center
/// cell to at least the peak floor, and stores the peak payloads. Payload
/// ownership at a shared cell goes to the higher score (ties: lower
/// object id). Boxes whose center lies outside the grid are skipped and
/// reported.
Heatmap render_frame(const std::vector<GtObject>& gt_boxes, const HeatmapSpec& spec);

/// Minimum score a rendered center cell is guaranteed to carry.
inline constexpr double kPeakFloor = 0.999;

struct HeatmapDetection {
  Box7 box;
  std::string class_name;
  double score = 0.0;
};

/// Local maxima at or above score_floor within an nms_kernel x nms_kernel
/// window, decoded through the stored peak payloads.
std::vector<HeatmapDetection> extract_peaks(const Heatmap& map, double score_floor,
                                            int nms_kernel);

}  // namespace bevkit
