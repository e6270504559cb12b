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

/// Per-class anchor template: mean dimensions plus the IoU thresholds the
/// fixed-grid matcher uses for this class.
struct ClassAnchorSpec {
  std::string name;
  double width_m = 1.9;
  double length_m = 4.6;
  double height_m = 1.6;
  double z_center_m = 0.8;
  double pos_iou = 0.6;
  double neg_iou = 0.45;
};

/// Regular BEV anchor grid: one anchor per (cell, class, yaw slot),
/// centered at the cell center with the class mean dimensions.
struct AnchorGridSpec {
  double x_min_m = -48.0;
  double x_max_m = 48.0;
  double y_min_m = -48.0;
  double y_max_m = 48.0;
  double cell_size_m = 0.2;
  std::vector<double> yaw_slots_rad = {0.0, 1.5707963267948966};
  std::vector<ClassAnchorSpec> classes;

  int cells_x() const;
  int cells_y() const;
  double cell_center_x(int ix) const { return x_min_m + (ix + 0.5) * cell_size_m; }
  double cell_center_y(int iy) const { return y_min_m + (iy + 0.5) * cell_size_m; }

  /// Cell index containing a coordinate, or nullopt outside the grid.
  std::optional<int> cell_of_x(double x) const;
  std::optional<int> cell_of_y(double y) const;

  Box7 anchor_box(int ix, int iy, int class_idx, int yaw_slot) const;
  std::optional<int> class_index(const std::string& name) const;
};

/// Materializes every anchor box of the grid (row-major cells, slots
/// inner). Intended for small grids and tests; assignment itself works on
/// indices and never builds this list.
std::vector<Box7> generate_anchor_grid(const AnchorGridSpec& spec);

enum class AnchorLabel : std::uint8_t { background = 0, ignore = 1, foreground = 2 };

/// Offsets from an anchor to its matched box: center deltas in meters,
/// log dimension ratios, and the heading encoded as (sin, cos) so the
/// parameterization stays continuous across the +-pi wrap.
struct RegressionTarget {
  double dx_m = 0.0;
  double dy_m = 0.0;
  double dz_m = 0.0;
  double dlog_length = 0.0;
  double dlog_width = 0.0;
  double dlog_height = 0.0;
  double sin_yaw = 0.0;
  double cos_yaw = 1.0;
};

RegressionTarget encode_regression(const Box7& gt, const Box7& anchor);

/// Inverse of encode_regression. Throws NonFiniteTarget on NaN/Inf fields
/// or a zero (sin, cos) pair.
Box7 decode_regression(const Box7& anchor, const RegressionTarget& target);

struct AnchorIndex {
  int ix = 0;
  int iy = 0;
  int yaw_slot = 0;
  int class_idx = 0;
};

struct ForegroundAnchor {
  AnchorIndex index;
  std::int64_t object_id = -1;
  RegressionTarget target;
};

/// A ground truth that could not receive any anchor (center off-grid, or
/// lost a center-cell collision to a larger box).
struct UnassignedGt {
  std::int64_t object_id = -1;
  std::string reason;
};

/// Ground truth input to assignment.
struct GtObject {
  Box7 box;
  std::string class_name;
  std::int64_t object_id = -1;
};

struct AssignmentResult {
  // labels[class_idx][(slot * ny + iy) * nx + ix]
  std::vector<std::vector<AnchorLabel>> labels;
  std::vector<ForegroundAnchor> foreground;
  std::vector<UnassignedGt> unassigned;

  std::size_t label_index(const AnchorGridSpec& spec, const AnchorIndex& idx) const;
  AnchorLabel label_at(const AnchorGridSpec& spec, const AnchorIndex& idx) const;
  int foreground_count_for(std::int64_t object_id) const;
};

/// Fixed-grid threshold matcher: foreground when the best rectangle IoU
/// clears pos_iou, background below neg_iou, ignore in between. A ground
/// truth that wins no anchor gets the anchor at its center cell promoted.
AssignmentResult assign_baseline_iou(const AnchorGridSpec& spec,
                                     const std::vector<GtObject>& gt_boxes);

/// One foreground anchor per ground truth: its center cell, yaw slot
/// nearest the ground-truth heading modulo pi. Everything else stays
/// background. Two centers in one cell: the larger footprint wins, the
/// loser is reported unassigned.
AssignmentResult assign_center_only(const AnchorGridSpec& spec,
                                    const std::vector<GtObject>& gt_boxes);

/// Elliptical assignment parameters. positive_scale and ignore_scale are
/// fractions of (length, width) giving the semi-axes of the foreground
/// and ignore ellipses.
struct ShapeEllipseParams {
  double positive_scale = 0.25;
  double ignore_scale = 0.5;
  int min_positive = 1;

  bool valid() const {
    return positive_scale > 0.0 && ignore_scale >= positive_scale &&
           min_positive >= 1;
  }
};

/// Shape-aware assignment: anchors inside the rotated ellipse with
/// semi-axes positive_scale*(length, width) around a ground truth center
/// become foreground, anchors inside the ignore_scale ellipse become
/// ignore, the rest background. Overlaps resolve to the ground truth with
/// the smallest Mahalanobis distance; a ground truth with fewer than
/// min_positive foreground anchors gets its nearest free anchor promoted.
AssignmentResult assign_adaptive_shape(const AnchorGridSpec& spec,
                                       const std::vector<GtObject>& gt_boxes,
                                       const ShapeEllipseParams& params);

}  // namespace bevkit
