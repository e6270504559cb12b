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

#include "bevkit/heatmap.hpp"

#include <algorithm>
#include <cmath>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {
constexpr double kTruncationM2 = 9.0;  // Mahalanobis radius 3
}

int HeatmapSpec::class_index(const std::string& name) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == name) return static_cast<int>(i);
  }
  return -1;
}

GaussianSigmas heatmap_sigmas(const Box7& box, const HeatmapSpec& spec) {
  const double floor_m = spec.min_sigma_cells * spec.cell_size_m;
  if (spec.mode == HeatmapMode::correlated) {
    return GaussianSigmas{std::max(spec.gaussian_scale * box.length, floor_m),
                          std::max(spec.gaussian_scale * box.width, floor_m)};
  }
  const double iso =
      std::max(spec.gaussian_scale * std::sqrt(box.length * box.width), floor_m);
  return GaussianSigmas{iso, iso};
}

namespace {

void render_gaussian(const Box7& box, const HeatmapSpec& spec,
                     const GaussianSigmas& sig, std::vector<double>& raster) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  // window: AABB of the radius-3 ellipse plus one cell of margin
  const double ex =
      3.0 * std::sqrt(sig.along_m * sig.along_m * c * c +
                      sig.across_m * sig.across_m * s * s) +
      spec.cell_size_m;
  const double ey =
      3.0 * std::sqrt(sig.along_m * sig.along_m * s * s +
                      sig.across_m * sig.across_m * c * c) +
      spec.cell_size_m;
  const int ix0 = std::max(
      0, static_cast<int>(std::floor((box.cx - ex - spec.x_min_m) / spec.cell_size_m)));
  const int ix1 = std::min(
      spec.cells_x - 1,
      static_cast<int>(std::ceil((box.cx + ex - spec.x_min_m) / spec.cell_size_m)));
  const int iy0 = std::max(
      0, static_cast<int>(std::floor((box.cy - ey - spec.y_min_m) / spec.cell_size_m)));
  const int iy1 = std::min(
      spec.cells_y - 1,
      static_cast<int>(std::ceil((box.cy + ey - spec.y_min_m) / spec.cell_size_m)));

  // isotropic case: the rotation cancels, so skip it and keep the raster
  // exactly independent of yaw
  const bool isotropic = sig.along_m == sig.across_m;

  for (int iy = iy0; iy <= iy1; ++iy) {
    for (int ix = ix0; ix <= ix1; ++ix) {
      const double dx = spec.cell_center_x(ix) - box.cx;
      const double dy = spec.cell_center_y(iy) - box.cy;
      const double ux = isotropic ? dx : c * dx + s * dy;
      const double uy = isotropic ? dy : -s * dx + c * dy;
      const double m2 = (ux / sig.along_m) * (ux / sig.along_m) +
                        (uy / sig.across_m) * (uy / sig.across_m);
      if (m2 > kTruncationM2) continue;
      const double g = std::exp(-0.5 * m2);
      double& cell = raster[static_cast<std::size_t>(iy) * spec.cells_x + ix];
      cell = std::max(cell, g);
    }
  }
}

}  // namespace

void render_correlated_gaussian(const Box7& box, const HeatmapSpec& spec,
                                std::vector<double>& raster) {
  HeatmapSpec corr = spec;
  corr.mode = HeatmapMode::correlated;
  render_gaussian(box, spec, heatmap_sigmas(box, corr), raster);
}

void render_uncorrelated_baseline(const Box7& box, const HeatmapSpec& spec,
                                  std::vector<double>& raster) {
  HeatmapSpec iso = spec;
  iso.mode = HeatmapMode::uncorrelated_baseline;
  render_gaussian(box, spec, heatmap_sigmas(box, iso), raster);
}

Heatmap render_frame(const std::vector<GtObject>& gt_boxes, const HeatmapSpec& spec) {
  if (spec.gaussian_scale <= 0.0 || spec.min_sigma_cells <= 0.0 ||
      spec.cells_x <= 0 || spec.cells_y <= 0 || spec.cell_size_m <= 0.0) {
    throw ConfigError("render_frame: invalid heatmap spec");
  }
  Heatmap map;
  map.spec = spec;
  map.channels.assign(spec.classes.size(), std::vector<double>(spec.cell_count(), 0.0));

  for (const GtObject& gt : gt_boxes) {
    const int cls = spec.class_index(gt.class_name);
    if (cls < 0) {
      map.skipped.push_back(SkippedBox{gt.object_id, "unknown class"});
      continue;
    }
    const int ix = static_cast<int>(std::floor((gt.box.cx - spec.x_min_m) / spec.cell_size_m));
    const int iy = static_cast<int>(std::floor((gt.box.cy - spec.y_min_m) / spec.cell_size_m));
    if (ix < 0 || ix >= spec.cells_x || iy < 0 || iy >= spec.cells_y) {
      map.skipped.push_back(SkippedBox{gt.object_id, "center outside grid"});
      continue;
    }

    std::vector<double>& raster = map.channels[cls];
    render_gaussian(gt.box, spec, heatmap_sigmas(gt.box, spec), raster);

    // Center cell is pinned high so the box stays extractable no matter
    // how the sub-cell offset quantizes the Gaussian.
    const std::size_t cell = static_cast<std::size_t>(iy) * spec.cells_x + ix;
    raster[cell] = std::max(raster[cell], kPeakFloor);

    PeakRecord peak;
    peak.object_id = gt.object_id;
    peak.score = raster[cell];
    peak.offset_x_cells = (gt.box.cx - spec.cell_center_x(ix)) / spec.cell_size_m;
    peak.offset_y_cells = (gt.box.cy - spec.cell_center_y(iy)) / spec.cell_size_m;
    peak.z_m = gt.box.cz;
    peak.width_m = gt.box.width;
    peak.length_m = gt.box.length;
    peak.height_m = gt.box.height;
    peak.sin_yaw = std::sin(gt.box.yaw);
    peak.cos_yaw = std::cos(gt.box.yaw);

    const std::size_t key = static_cast<std::size_t>(cls) * spec.cell_count() + cell;
    const auto it = map.peaks.find(key);
    if (it == map.peaks.end()) {
      map.peaks.emplace(key, peak);
    } else if (peak.score > it->second.score ||
               (peak.score == it->second.score &&
                peak.object_id < it->second.object_id)) {
      it->second = peak;
    }
  }
  return map;
}

std::vector<HeatmapDetection> extract_peaks(const Heatmap& map, double score_floor,
                                            int nms_kernel) {
  std::vector<HeatmapDetection> out;
  const HeatmapSpec& spec = map.spec;
  const int half = std::max(1, nms_kernel / 2);

  for (std::size_t cls = 0; cls < map.channels.size(); ++cls) {
    const std::vector<double>& raster = map.channels[cls];
    for (int iy = 0; iy < spec.cells_y; ++iy) {
      for (int ix = 0; ix < spec.cells_x; ++ix) {
        const double v = raster[static_cast<std::size_t>(iy) * spec.cells_x + ix];
        if (v < score_floor) continue;
        bool is_max = true;
        for (int dy = -half; dy <= half && is_max; ++dy) {
          for (int dx = -half; dx <= half && is_max; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int jx = ix + dx;
            const int jy = iy + dy;
            if (jx < 0 || jx >= spec.cells_x || jy < 0 || jy >= spec.cells_y) continue;
            const double w = raster[static_cast<std::size_t>(jy) * spec.cells_x + jx];
            // plateau tie: earlier scan order wins
            if (w > v || (w == v && (jy < iy || (jy == iy && jx < ix)))) {
              is_max = false;
            }
          }
        }
        if (!is_max) continue;
        const std::size_t cell = static_cast<std::size_t>(iy) * spec.cells_x + ix;
        const auto it = map.peaks.find(cls * spec.cell_count() + cell);
        if (it == map.peaks.end()) continue;  // max without payload: not a center
        const PeakRecord& p = it->second;
        HeatmapDetection det;
        det.class_name = spec.classes[cls];
        det.score = v;
        det.box = Box7(spec.cell_center_x(ix) + p.offset_x_cells * spec.cell_size_m,
                       spec.cell_center_y(iy) + p.offset_y_cells * spec.cell_size_m,
                       p.z_m, p.width_m, p.length_m, p.height_m,
                       std::atan2(p.sin_yaw, p.cos_yaw));
        out.push_back(std::move(det));
      }
    }
  }
  return out;
}

}  // namespace bevkit
