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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bevkit/geometry.hpp"
#include "bevkit/point_cloud.hpp"

namespace bevkit {

/// Expresses every frame's points in the newest frame's ego coordinates.
/// world_from_ego must have one pose per frame (MissingPose otherwise);
/// frames are expected oldest first. Frame membership is preserved by
/// position in the returned list.
std::vector<PointCloud> compensate_and_merge(const std::vector<PointCloudFrame>& frames,
                                             const std::vector<Pose2>& world_from_ego);

struct PillarizeSpec {
  double x_min_m = -48.0;
  double y_min_m = -48.0;
  double cell_size_m = 0.2;
  int cells_x = 480;
  int cells_y = 480;
  int max_points_per_pillar = 32;
};

/// One occupied pillar of one frame. Features are row-major
/// [max_points_per_pillar x feature_count], zero padded past count.
struct Pillar {
  int ix = 0;
  int iy = 0;
  int frame = 0;
  int count = 0;
  std::vector<double> features;
};

/// Sparse pillar tensor over N frames; the logical dense shape is
/// [1, n_frames, pillars, max_points_per_pillar, feature_count].
struct PillarTensor {
  PillarizeSpec spec;
  int n_frames = 0;
  int feature_count = 0;
  std::vector<Pillar> pillars;
};

/// Buckets each frame's points into BEV cells. Per-point features are the
/// cloud columns followed by the (x, y) offsets from the pillar center.
/// Pillars overflowing max_points_per_pillar keep the first points in
/// acquisition order. Points outside the grid extent produce pillars with
/// out-of-range indices; the scatter step reports and skips those.
PillarTensor pillarize(const std::vector<PointCloud>& per_frame_points,
                       const PillarizeSpec& spec);

/// Pure per-pillar reduction: consumes count rows of stride feature_count
/// and writes feature_count outputs.
using PillarReducer =
    std::function<void(std::span<const double> features, int count, int stride,
                       std::span<double> out)>;

/// Mean over the valid points, per feature, summed in index order.
PillarReducer mean_reducer();
/// Maximum over the valid points, per feature.
PillarReducer max_reducer();

struct OutOfExtentReport {
  int frame = 0;
  int ix = 0;
  int iy = 0;
};

/// Dense BEV grid [size_y][size_x][channels], row-major. For a stacked
/// grid the channel axis carries n_frames blocks of channels_per_frame
/// values, oldest frame first.
struct BevGrid {
  int size_x = 0;
  int size_y = 0;
  int channels = 0;
  int n_frames = 1;
  double cell_size_m = 0.0;
  double x_min_m = 0.0;
  double y_min_m = 0.0;
  std::vector<double> data;
  std::vector<OutOfExtentReport> reports;

  double at(int ix, int iy, int c) const {
    return data[(static_cast<std::size_t>(iy) * size_x + ix) * channels + c];
  }
  double& at(int ix, int iy, int c) {
    return data[(static_cast<std::size_t>(iy) * size_x + ix) * channels + c];
  }
};

/// Encodes and scatters the pillars of a single frame index into a plain
/// single-frame grid.
BevGrid encode_scatter_frame(const PillarTensor& tensor, int frame,
                             const PillarReducer& reducer);

/// Folds the N frames through the per-pillar encoder and stacks the
/// resulting grids along the channel axis, frame-major with the oldest
/// frame first. The channel order is part of the format contract.
BevGrid encode_and_stack(const PillarTensor& tensor, const PillarReducer& reducer);

/// Splits the stacked channel blocks back into per-frame grids; the exact
/// inverse of the stacking step. Throws IndivisibleChannels when the
/// channel count is not a multiple of n.
std::vector<BevGrid> unstack(const BevGrid& grid, int n);

}  // namespace bevkit
