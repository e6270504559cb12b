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

#include "bevkit/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bevkit/errors.hpp"

namespace bevkit {

std::vector<PointCloud> compensate_and_merge(const std::vector<PointCloudFrame>& frames,
                                             const std::vector<Pose2>& world_from_ego) {
  if (frames.size() != world_from_ego.size()) {
    throw MissingPose("compensate_and_merge: one pose per frame required");
  }
  std::vector<PointCloud> out;
  out.reserve(frames.size());
  if (frames.empty()) return out;

  const Pose2 newest_from_world = inverse(world_from_ego.back());
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const Pose2 newest_from_frame = compose(newest_from_world, world_from_ego[k]);
    out.push_back(transform_points(frames[k].points, newest_from_frame));
  }
  return out;
}

PillarTensor pillarize(const std::vector<PointCloud>& per_frame_points,
                       const PillarizeSpec& spec) {
  PillarTensor tensor;
  tensor.spec = spec;
  tensor.n_frames = static_cast<int>(per_frame_points.size());

  for (std::size_t f = 0; f < per_frame_points.size(); ++f) {
    const PointCloud& cloud = per_frame_points[f];
    const int base_cols = static_cast<int>(cloud.column_count());
    const int features = base_cols + 2;  // + offsets from pillar center
    if (tensor.feature_count == 0) {
      tensor.feature_count = features;
    } else if (tensor.feature_count != features) {
      throw ConfigError("pillarize: frames disagree on column count");
    }

    std::map<std::pair<int, int>, std::size_t> index;  // (iy, ix) -> pillar slot
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const int ix = static_cast<int>(std::floor((cloud.x(i) - spec.x_min_m) / spec.cell_size_m));
      const int iy = static_cast<int>(std::floor((cloud.y(i) - spec.y_min_m) / spec.cell_size_m));
      const auto key = std::make_pair(iy, ix);
      auto it = index.find(key);
      if (it == index.end()) {
        Pillar p;
        p.ix = ix;
        p.iy = iy;
        p.frame = static_cast<int>(f);
        p.features.assign(
            static_cast<std::size_t>(spec.max_points_per_pillar) * features, 0.0);
        it = index.emplace(key, tensor.pillars.size()).first;
        tensor.pillars.push_back(std::move(p));
      }
      Pillar& pillar = tensor.pillars[it->second];
      if (pillar.count >= spec.max_points_per_pillar) continue;  // deterministic truncation

      const double center_x = spec.x_min_m + (ix + 0.5) * spec.cell_size_m;
      const double center_y = spec.y_min_m + (iy + 0.5) * spec.cell_size_m;
      double* row = pillar.features.data() +
                    static_cast<std::size_t>(pillar.count) * features;
      for (int c = 0; c < base_cols; ++c) row[c] = cloud.at(i, c);
      row[base_cols] = cloud.x(i) - center_x;
      row[base_cols + 1] = cloud.y(i) - center_y;
      ++pillar.count;
    }
  }
  return tensor;
}

PillarReducer mean_reducer() {
  return [](std::span<const double> features, int count, int stride,
            std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    if (count == 0) return;
    for (int i = 0; i < count; ++i) {
      for (int c = 0; c < stride; ++c) out[c] += features[i * stride + c];
    }
    for (int c = 0; c < stride; ++c) out[c] /= count;
  };
}

PillarReducer max_reducer() {
  return [](std::span<const double> features, int count, int stride,
            std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    if (count == 0) return;
    for (int c = 0; c < stride; ++c) out[c] = features[c];
    for (int i = 1; i < count; ++i) {
      for (int c = 0; c < stride; ++c) {
        out[c] = std::max(out[c], features[i * stride + c]);
      }
    }
  };
}

namespace {

BevGrid make_grid(const PillarizeSpec& spec, int channels, int n_frames) {
  BevGrid grid;
  grid.size_x = spec.cells_x;
  grid.size_y = spec.cells_y;
  grid.channels = channels;
  grid.n_frames = n_frames;
  grid.cell_size_m = spec.cell_size_m;
  grid.x_min_m = spec.x_min_m;
  grid.y_min_m = spec.y_min_m;
  grid.data.assign(static_cast<std::size_t>(spec.cells_x) * spec.cells_y * channels, 0.0);
  return grid;
}

void scatter_frame_into(const PillarTensor& tensor, int frame,
                        const PillarReducer& reducer, BevGrid& grid,
                        int channel_offset) {
  const int f1 = tensor.feature_count;
  std::vector<double> encoded(f1);
  for (const Pillar& p : tensor.pillars) {
    if (p.frame != frame) continue;
    if (p.ix < 0 || p.ix >= grid.size_x || p.iy < 0 || p.iy >= grid.size_y) {
      grid.reports.push_back(OutOfExtentReport{p.frame, p.ix, p.iy});
      continue;
    }
    reducer(p.features, p.count, f1, encoded);
    for (int c = 0; c < f1; ++c) grid.at(p.ix, p.iy, channel_offset + c) = encoded[c];
  }
}

}  // namespace

BevGrid encode_scatter_frame(const PillarTensor& tensor, int frame,
                             const PillarReducer& reducer) {
  BevGrid grid = make_grid(tensor.spec, tensor.feature_count, 1);
  scatter_frame_into(tensor, frame, reducer, grid, 0);
  return grid;
}

BevGrid encode_and_stack(const PillarTensor& tensor, const PillarReducer& reducer) {
  const int f1 = tensor.feature_count;
  BevGrid grid = make_grid(tensor.spec, tensor.n_frames * f1, tensor.n_frames);
  for (int frame = 0; frame < tensor.n_frames; ++frame) {
    scatter_frame_into(tensor, frame, reducer, grid, frame * f1);
  }
  return grid;
}

std::vector<BevGrid> unstack(const BevGrid& grid, int n) {
  if (n <= 0 || grid.channels % n != 0) {
    throw IndivisibleChannels("unstack: channel count not divisible by frame count");
  }
  const int per_frame = grid.channels / n;
  std::vector<BevGrid> out;
  out.reserve(n);
  for (int f = 0; f < n; ++f) {
    BevGrid g;
    g.size_x = grid.size_x;
    g.size_y = grid.size_y;
    g.channels = per_frame;
    g.n_frames = 1;
    g.cell_size_m = grid.cell_size_m;
    g.x_min_m = grid.x_min_m;
    g.y_min_m = grid.y_min_m;
    g.data.resize(static_cast<std::size_t>(grid.size_x) * grid.size_y * per_frame);
    for (int iy = 0; iy < grid.size_y; ++iy) {
      for (int ix = 0; ix < grid.size_x; ++ix) {
        for (int c = 0; c < per_frame; ++c) {
          g.at(ix, iy, c) = grid.at(ix, iy, f * per_frame + c);
        }
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace bevkit
