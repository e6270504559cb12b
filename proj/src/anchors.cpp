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

#include "bevkit/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

constexpr double kRangeEps = 1e-9;

/// Angular distance between two headings identified modulo pi, in [0, pi/2].
double yaw_distance_mod_pi(double a, double b) {
  double d = normalize_angle(a - b);
  if (d > std::numbers::pi / 2.0) d -= std::numbers::pi;
  if (d <= -std::numbers::pi / 2.0) d += std::numbers::pi;
  return std::abs(d);
}

int nearest_yaw_slot(const AnchorGridSpec& spec, double yaw) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < spec.yaw_slots_rad.size(); ++s) {
    const double d = yaw_distance_mod_pi(yaw, spec.yaw_slots_rad[s]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(s);
    }
  }
  return best;
}

struct BestMatch {
  double score = -1.0;  // IoU (baseline) or negated m2 (not used there)
  int gt_idx = -1;
};

}  // namespace

int AnchorGridSpec::cells_x() const {
  const double span = x_max_m - x_min_m;
  if (span <= 0.0) return 0;
  return static_cast<int>(std::floor(span / cell_size_m + kRangeEps));
}

int AnchorGridSpec::cells_y() const {
  const double span = y_max_m - y_min_m;
  if (span <= 0.0) return 0;
  return static_cast<int>(std::floor(span / cell_size_m + kRangeEps));
}

std::optional<int> AnchorGridSpec::cell_of_x(double x) const {
  const int i = static_cast<int>(std::floor((x - x_min_m) / cell_size_m));
  if (i < 0 || i >= cells_x()) return std::nullopt;
  return i;
}

std::optional<int> AnchorGridSpec::cell_of_y(double y) const {
  const int i = static_cast<int>(std::floor((y - y_min_m) / cell_size_m));
  if (i < 0 || i >= cells_y()) return std::nullopt;
  return i;
}

Box7 AnchorGridSpec::anchor_box(int ix, int iy, int class_idx, int yaw_slot) const {
  const ClassAnchorSpec& cls = classes[class_idx];
  return Box7(cell_center_x(ix), cell_center_y(iy), cls.z_center_m, cls.width_m,
              cls.length_m, cls.height_m, yaw_slots_rad[yaw_slot]);
}

std::optional<int> AnchorGridSpec::class_index(const std::string& name) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::vector<Box7> generate_anchor_grid(const AnchorGridSpec& spec) {
  std::vector<Box7> anchors;
  const int nx = spec.cells_x();
  const int ny = spec.cells_y();
  anchors.reserve(static_cast<std::size_t>(nx) * ny * spec.classes.size() *
                  spec.yaw_slots_rad.size());
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      for (std::size_t c = 0; c < spec.classes.size(); ++c) {
        for (std::size_t s = 0; s < spec.yaw_slots_rad.size(); ++s) {
          anchors.push_back(spec.anchor_box(ix, iy, static_cast<int>(c),
                                            static_cast<int>(s)));
        }
      }
    }
  }
  return anchors;
}

RegressionTarget encode_regression(const Box7& gt, const Box7& anchor) {
  RegressionTarget t;
  t.dx_m = gt.cx - anchor.cx;
  t.dy_m = gt.cy - anchor.cy;
  t.dz_m = gt.cz - anchor.cz;
  t.dlog_length = std::log(gt.length / anchor.length);
  t.dlog_width = std::log(gt.width / anchor.width);
  t.dlog_height = std::log(gt.height / anchor.height);
  t.sin_yaw = std::sin(gt.yaw);
  t.cos_yaw = std::cos(gt.yaw);
  return t;
}

Box7 decode_regression(const Box7& anchor, const RegressionTarget& t) {
  const double fields[] = {t.dx_m,        t.dy_m,       t.dz_m,
                           t.dlog_length, t.dlog_width, t.dlog_height,
                           t.sin_yaw,     t.cos_yaw};
  for (const double f : fields) {
    if (!std::isfinite(f)) throw NonFiniteTarget("decode_regression: non-finite field");
  }
  if (t.sin_yaw == 0.0 && t.cos_yaw == 0.0) {
    throw NonFiniteTarget("decode_regression: zero (sin, cos) pair");
  }
  return Box7(anchor.cx + t.dx_m, anchor.cy + t.dy_m, anchor.cz + t.dz_m,
              anchor.width * std::exp(t.dlog_width),
              anchor.length * std::exp(t.dlog_length),
              anchor.height * std::exp(t.dlog_height),
              std::atan2(t.sin_yaw, t.cos_yaw));
}

std::size_t AssignmentResult::label_index(const AnchorGridSpec& spec,
                                          const AnchorIndex& idx) const {
  const std::size_t nx = static_cast<std::size_t>(spec.cells_x());
  const std::size_t ny = static_cast<std::size_t>(spec.cells_y());
  return (static_cast<std::size_t>(idx.yaw_slot) * ny + idx.iy) * nx + idx.ix;
}

AnchorLabel AssignmentResult::label_at(const AnchorGridSpec& spec,
                                       const AnchorIndex& idx) const {
  return labels[idx.class_idx][label_index(spec, idx)];
}

int AssignmentResult::foreground_count_for(std::int64_t object_id) const {
  int n = 0;
  for (const ForegroundAnchor& fa : foreground) {
    if (fa.object_id == object_id) ++n;
  }
  return n;
}

namespace {

struct DenseAssignState {
  const AnchorGridSpec& spec;
  AssignmentResult& result;
  // per class: which gt currently owns each (slot, cell) as foreground
  std::vector<std::vector<int>> fg_owner;

  DenseAssignState(const AnchorGridSpec& s, AssignmentResult& r)
      : spec(s), result(r) {
    const std::size_t plane = static_cast<std::size_t>(s.cells_x()) *
                              s.cells_y() * s.yaw_slots_rad.size();
    result.labels.assign(s.classes.size(),
                         std::vector<AnchorLabel>(plane, AnchorLabel::background));
    fg_owner.assign(s.classes.size(), std::vector<int>(plane, -1));
  }

  void set_foreground(const AnchorIndex& idx, const GtObject& gt, int gt_idx) {
    const std::size_t li = result.label_index(spec, idx);
    result.labels[idx.class_idx][li] = AnchorLabel::foreground;
    fg_owner[idx.class_idx][li] = gt_idx;
    result.foreground.push_back(ForegroundAnchor{
        idx, gt.object_id,
        encode_regression(gt.box, spec.anchor_box(idx.ix, idx.iy, idx.class_idx,
                                                  idx.yaw_slot))});
  }

  bool is_foreground(const AnchorIndex& idx) const {
    const std::size_t li = result.label_index(spec, idx);
    return fg_owner[idx.class_idx][li] >= 0;
  }
};

/// Promotes the free anchor nearest to the ground-truth center, preferring
/// the given yaw slot on ties. Searches cells in expanding square rings.
/// Returns false when the center is off-grid or every anchor is taken.
bool promote_nearest_free(DenseAssignState& state, const GtObject& gt,
                          int gt_idx, int class_idx, int preferred_slot) {
  const AnchorGridSpec& spec = state.spec;
  const auto cx = spec.cell_of_x(gt.box.cx);
  const auto cy = spec.cell_of_y(gt.box.cy);
  if (!cx || !cy) return false;
  const int nx = spec.cells_x();
  const int ny = spec.cells_y();
  const int max_ring = std::max(nx, ny);

  double best_d2 = std::numeric_limits<double>::infinity();
  int best_penalty = 2;
  AnchorIndex best{};
  bool found = false;
  for (int ring = 0; ring < max_ring; ++ring) {
    // A ring-r cell center is at least (r - 0.5) cells from the center.
    if (found) {
      const double ring_min = (ring - 0.5) * spec.cell_size_m;
      if (ring_min > 0.0 && ring_min * ring_min > best_d2) break;
    }
    for (int dy = -ring; dy <= ring; ++dy) {
      for (int dx = -ring; dx <= ring; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
        const int ix = *cx + dx;
        const int iy = *cy + dy;
        if (ix < 0 || ix >= nx || iy < 0 || iy >= ny) continue;
        const double ddx = spec.cell_center_x(ix) - gt.box.cx;
        const double ddy = spec.cell_center_y(iy) - gt.box.cy;
        const double d2 = ddx * ddx + ddy * ddy;
        for (std::size_t s = 0; s < spec.yaw_slots_rad.size(); ++s) {
          const AnchorIndex idx{ix, iy, static_cast<int>(s), class_idx};
          if (state.is_foreground(idx)) continue;
          const int penalty = (static_cast<int>(s) == preferred_slot) ? 0 : 1;
          if (d2 < best_d2 || (d2 == best_d2 && penalty < best_penalty)) {
            best_d2 = d2;
            best_penalty = penalty;
            best = idx;
            found = true;
          }
        }
      }
    }
  }
  if (found) {
    state.set_foreground(best, gt, gt_idx);
    return true;
  }
  return false;
}

}  // namespace

AssignmentResult assign_baseline_iou(const AnchorGridSpec& spec,
                                     const std::vector<GtObject>& gt_boxes) {
  AssignmentResult result;
  DenseAssignState state(spec, result);
  const int nx = spec.cells_x();
  const int ny = spec.cells_y();
  const std::size_t n_slots = spec.yaw_slots_rad.size();
  const std::size_t plane = static_cast<std::size_t>(nx) * ny * n_slots;

  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    std::vector<int> class_gts;
    for (std::size_t g = 0; g < gt_boxes.size(); ++g) {
      if (gt_boxes[g].class_name == spec.classes[c].name) {
        class_gts.push_back(static_cast<int>(g));
      }
    }
    if (class_gts.empty()) continue;

    std::vector<BestMatch> best(plane);

    // Score anchors inside the window where the rectangles can overlap.
    for (const int g : class_gts) {
      const Box7& gt = gt_boxes[g].box;
      const ConvexPolygon poly = box_to_bev_polygon(gt);
      double gx_min = poly.vertices[0].x, gx_max = poly.vertices[0].x;
      double gy_min = poly.vertices[0].y, gy_max = poly.vertices[0].y;
      for (const Vec2& v : poly.vertices) {
        gx_min = std::min(gx_min, v.x);
        gx_max = std::max(gx_max, v.x);
        gy_min = std::min(gy_min, v.y);
        gy_max = std::max(gy_max, v.y);
      }
      // widest anchor rect half-extent, either orientation
      const double reach =
          0.5 * std::max(spec.classes[c].length_m, spec.classes[c].width_m) +
          spec.cell_size_m;
      const int ix0 = std::max(0, static_cast<int>(std::floor(
                                      (gx_min - reach - spec.x_min_m) / spec.cell_size_m)));
      const int ix1 = std::min(nx - 1, static_cast<int>(std::ceil(
                                           (gx_max + reach - spec.x_min_m) / spec.cell_size_m)));
      const int iy0 = std::max(0, static_cast<int>(std::floor(
                                      (gy_min - reach - spec.y_min_m) / spec.cell_size_m)));
      const int iy1 = std::min(ny - 1, static_cast<int>(std::ceil(
                                           (gy_max + reach - spec.y_min_m) / spec.cell_size_m)));
      for (int iy = iy0; iy <= iy1; ++iy) {
        for (int ix = ix0; ix <= ix1; ++ix) {
          for (std::size_t s = 0; s < n_slots; ++s) {
            const Box7 anchor = spec.anchor_box(ix, iy, static_cast<int>(c),
                                                static_cast<int>(s));
            const double iou = axis_aligned_iou_bev(anchor, gt);
            BestMatch& bm = best[(s * ny + iy) * nx + ix];
            if (iou > bm.score) {
              bm.score = iou;
              bm.gt_idx = g;
            }
          }
        }
      }
    }

    // Threshold pass. Untouched anchors have score <= 0 and fall to the
    // same rule with IoU 0.
    const double pos = spec.classes[c].pos_iou;
    const double neg = spec.classes[c].neg_iou;
    for (std::size_t li = 0; li < plane; ++li) {
      const double iou = std::max(best[li].score, 0.0);
      if (iou >= pos && best[li].gt_idx >= 0) {
        const int slot = static_cast<int>(li / (static_cast<std::size_t>(nx) * ny));
        const std::size_t rem = li % (static_cast<std::size_t>(nx) * ny);
        AnchorIndex idx{static_cast<int>(rem % nx), static_cast<int>(rem / nx),
                        slot, static_cast<int>(c)};
        state.set_foreground(idx, gt_boxes[best[li].gt_idx], best[li].gt_idx);
      } else if (!(iou < neg)) {
        result.labels[c][li] = AnchorLabel::ignore;
      }
    }

    // Center-cell fallback for ground truths that won nothing.
    for (const int g : class_gts) {
      bool has_fg = false;
      for (const ForegroundAnchor& fa : result.foreground) {
        if (fa.object_id == gt_boxes[g].object_id &&
            fa.index.class_idx == static_cast<int>(c)) {
          has_fg = true;
          break;
        }
      }
      if (has_fg) continue;
      const int slot = nearest_yaw_slot(spec, gt_boxes[g].box.yaw);
      if (!promote_nearest_free(state, gt_boxes[g], g, static_cast<int>(c), slot)) {
        result.unassigned.push_back(
            UnassignedGt{gt_boxes[g].object_id, "center outside grid"});
      }
    }
  }
  return result;
}

AssignmentResult assign_center_only(const AnchorGridSpec& spec,
                                    const std::vector<GtObject>& gt_boxes) {
  AssignmentResult result;
  DenseAssignState state(spec, result);
  const int nx = spec.cells_x();

  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    // winner per center cell: larger footprint first
    std::vector<std::pair<std::size_t, int>> cell_winner;  // (cell, gt idx)
    for (std::size_t g = 0; g < gt_boxes.size(); ++g) {
      if (gt_boxes[g].class_name != spec.classes[c].name) continue;
      const auto ix = spec.cell_of_x(gt_boxes[g].box.cx);
      const auto iy = spec.cell_of_y(gt_boxes[g].box.cy);
      if (!ix || !iy) {
        result.unassigned.push_back(
            UnassignedGt{gt_boxes[g].object_id, "center outside grid"});
        continue;
      }
      const std::size_t cell = static_cast<std::size_t>(*iy) * nx + *ix;
      auto it = std::find_if(cell_winner.begin(), cell_winner.end(),
                             [&](const auto& p) { return p.first == cell; });
      if (it == cell_winner.end()) {
        cell_winner.emplace_back(cell, static_cast<int>(g));
      } else if (gt_boxes[g].box.footprint_area() >
                 gt_boxes[it->second].box.footprint_area()) {
        result.unassigned.push_back(UnassignedGt{
            gt_boxes[it->second].object_id, "center cell collision"});
        it->second = static_cast<int>(g);
      } else {
        result.unassigned.push_back(
            UnassignedGt{gt_boxes[g].object_id, "center cell collision"});
      }
    }
    for (const auto& [cell, g] : cell_winner) {
      const AnchorIndex idx{static_cast<int>(cell % nx),
                            static_cast<int>(cell / nx),
                            nearest_yaw_slot(spec, gt_boxes[g].box.yaw),
                            static_cast<int>(c)};
      state.set_foreground(idx, gt_boxes[g], g);
    }
  }
  return result;
}

AssignmentResult assign_adaptive_shape(const AnchorGridSpec& spec,
                                       const std::vector<GtObject>& gt_boxes,
                                       const ShapeEllipseParams& params) {
  if (!params.valid()) {
    throw ConfigError("assign_adaptive_shape: invalid ellipse params");
  }
  AssignmentResult result;
  DenseAssignState state(spec, result);
  const int nx = spec.cells_x();
  const int ny = spec.cells_y();
  const std::size_t n_slots = spec.yaw_slots_rad.size();
  const std::size_t cells = static_cast<std::size_t>(nx) * ny;
  const double ignore_m2 =
      (params.ignore_scale / params.positive_scale) *
      (params.ignore_scale / params.positive_scale);

  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    std::vector<int> class_gts;
    for (std::size_t g = 0; g < gt_boxes.size(); ++g) {
      if (gt_boxes[g].class_name == spec.classes[c].name) {
        class_gts.push_back(static_cast<int>(g));
      }
    }
    if (class_gts.empty()) continue;

    // per cell: smallest normalized squared distance and its ground truth
    std::vector<double> best_m2(cells, std::numeric_limits<double>::infinity());
    std::vector<int> best_gt(cells, -1);

    for (const int g : class_gts) {
      const Box7& gt = gt_boxes[g].box;
      const double a_pos = params.positive_scale * gt.length;
      const double b_pos = params.positive_scale * gt.width;
      const double a_ign = params.ignore_scale * gt.length;
      const double b_ign = params.ignore_scale * gt.width;
      const double cy_ = std::cos(gt.yaw);
      const double sy_ = std::sin(gt.yaw);
      // window: AABB of the ignore ellipse plus one cell of margin
      const double ex = std::sqrt(a_ign * a_ign * cy_ * cy_ + b_ign * b_ign * sy_ * sy_) +
                        spec.cell_size_m;
      const double ey = std::sqrt(a_ign * a_ign * sy_ * sy_ + b_ign * b_ign * cy_ * cy_) +
                        spec.cell_size_m;
      const int ix0 = std::max(0, static_cast<int>(std::floor(
                                      (gt.cx - ex - spec.x_min_m) / spec.cell_size_m)));
      const int ix1 = std::min(nx - 1, static_cast<int>(std::ceil(
                                           (gt.cx + ex - spec.x_min_m) / spec.cell_size_m)));
      const int iy0 = std::max(0, static_cast<int>(std::floor(
                                      (gt.cy - ey - spec.y_min_m) / spec.cell_size_m)));
      const int iy1 = std::min(ny - 1, static_cast<int>(std::ceil(
                                           (gt.cy + ey - spec.y_min_m) / spec.cell_size_m)));
      for (int iy = iy0; iy <= iy1; ++iy) {
        for (int ix = ix0; ix <= ix1; ++ix) {
          const double dx = spec.cell_center_x(ix) - gt.cx;
          const double dy = spec.cell_center_y(iy) - gt.cy;
          const double ux = cy_ * dx + sy_ * dy;
          const double uy = -sy_ * dx + cy_ * dy;
          const double m2 = (ux / a_pos) * (ux / a_pos) + (uy / b_pos) * (uy / b_pos);
          const std::size_t cell = static_cast<std::size_t>(iy) * nx + ix;
          if (m2 < best_m2[cell]) {
            best_m2[cell] = m2;
            best_gt[cell] = g;
          }
        }
      }
    }

    for (std::size_t cell = 0; cell < cells; ++cell) {
      if (best_gt[cell] < 0) continue;
      const int ix = static_cast<int>(cell % nx);
      const int iy = static_cast<int>(cell / nx);
      if (best_m2[cell] <= 1.0) {
        for (std::size_t s = 0; s < n_slots; ++s) {
          state.set_foreground(AnchorIndex{ix, iy, static_cast<int>(s),
                                           static_cast<int>(c)},
                               gt_boxes[best_gt[cell]], best_gt[cell]);
        }
      } else if (best_m2[cell] <= ignore_m2) {
        for (std::size_t s = 0; s < n_slots; ++s) {
          result.labels[c][(s * ny + iy) * nx + ix] = AnchorLabel::ignore;
        }
      }
    }

    // Every ground truth must end up trainable.
    for (const int g : class_gts) {
      int count = 0;
      for (const ForegroundAnchor& fa : result.foreground) {
        if (fa.object_id == gt_boxes[g].object_id &&
            fa.index.class_idx == static_cast<int>(c)) {
          ++count;
        }
      }
      while (count < params.min_positive) {
        const int slot = nearest_yaw_slot(spec, gt_boxes[g].box.yaw);
        if (!promote_nearest_free(state, gt_boxes[g], g, static_cast<int>(c), slot)) {
          result.unassigned.push_back(
              UnassignedGt{gt_boxes[g].object_id, "center outside grid"});
          break;
        }
        ++count;
      }
    }
  }
  return result;
}

}  // namespace bevkit
