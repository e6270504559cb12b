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

#include "bevkit/gt_database.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {

Pose2 box_pose(const Box7& box) { return Pose2{box.cx, box.cy, box.yaw}; }

/// World pose of a box labeled in ego coordinates.
Pose2 world_box_pose(const Pose2& world_from_ego, const Box7& box_ego) {
  return compose(world_from_ego, box_pose(box_ego));
}

PointCloud crop_and_canonicalize(const LabeledFrame& frame, const Box7& box_ego,
                                 const Pose2& canonical_from_world,
                                 double margin) {
  const PointCloud& pts = frame.points;
  PointCloud out;
  out.columns = pts.columns;

  const std::vector<double> xs = pts.column(0);
  const std::vector<double> ys = pts.column(1);
  const std::vector<double> zs = pts.column(2);
  const std::vector<std::size_t> inside = points_in_box(xs, ys, zs, box_ego, margin);

  const Pose2 canonical_from_ego = compose(canonical_from_world, frame.ego_pose);
  out.data.reserve(inside.size() * pts.column_count());
  for (const std::size_t i : inside) {
    const Vec2 p = apply(canonical_from_ego, Vec2{xs[i], ys[i]});
    for (std::size_t c = 0; c < pts.column_count(); ++c) {
      out.data.push_back(pts.at(i, c));
    }
    out.at(out.size() - 1, 0) = p.x;
    out.at(out.size() - 1, 1) = p.y;
  }
  return out;
}

}  // namespace

Box7 GtDatabaseEntry::step_box_canonical(std::size_t step) const {
  const Pose2& p = steps[step].pose_in_canonical;
  return Box7(p.tx, p.ty, z_center_m, width_m, length_m, height_m, p.theta);
}

std::vector<std::size_t> GtDatabase::entries_of_class(const std::string& class_name) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].class_name == class_name) out.push_back(i);
  }
  return out;
}

GtDatabase build_database(const std::vector<LabeledFrame>& frames, int n_history,
                          double crop_margin) {
  GtDatabase db;

  for (std::size_t f = 0; f < frames.size(); ++f) {
    const LabeledFrame& current = frames[f];
    // entry index per object id, for pair linking within this frame
    std::map<std::int64_t, std::size_t> frame_entries;

    for (const FrameLabel& label : current.labels) {
      GtDatabaseEntry entry;
      entry.entry_id = static_cast<std::int64_t>(db.entries.size());
      entry.source_frame_id = current.frame_id;
      entry.object_id = label.object_id;
      entry.class_name = label.class_name;
      entry.width_m = label.box.width;
      entry.length_m = label.box.length;
      entry.height_m = label.box.height;
      entry.z_center_m = label.box.cz;

      const Pose2 world_pose0 = world_box_pose(current.ego_pose, label.box);
      const Pose2 canonical_from_world = inverse(world_pose0);

      // World box poses per step where the object is labeled.
      const int max_steps = std::min<int>(n_history, static_cast<int>(f) + 1);
      std::vector<std::optional<Pose2>> step_pose(max_steps);
      step_pose[0] = world_pose0;
      int last_labeled = 0;
      for (int k = 1; k < max_steps; ++k) {
        const LabeledFrame& past = frames[f - k];
        for (const FrameLabel& pl : past.labels) {
          if (pl.object_id == label.object_id) {
            step_pose[k] = world_box_pose(past.ego_pose, pl.box);
            last_labeled = k;
            break;
          }
        }
      }
      // Bridge gaps between labeled steps linearly; drop the unlabeled tail.
      std::vector<bool> interpolated(max_steps, false);
      for (int k = 1; k < last_labeled; ++k) {
        if (step_pose[k]) continue;
        int a = k - 1;
        while (!step_pose[a]) --a;
        int b = k + 1;
        while (!step_pose[b]) ++b;
        const double t = static_cast<double>(k - a) / (b - a);
        const Pose2& pa = *step_pose[a];
        const Pose2& pb = *step_pose[b];
        step_pose[k] = Pose2{pa.tx + t * (pb.tx - pa.tx), pa.ty + t * (pb.ty - pa.ty),
                             normalize_angle(pa.theta +
                                             t * normalize_angle(pb.theta - pa.theta))};
        interpolated[k] = true;
      }

      for (int k = 0; k <= last_labeled; ++k) {
        const LabeledFrame& src = frames[f - k];
        EntryStep step;
        step.pose_in_canonical = compose(canonical_from_world, *step_pose[k]);
        step.box_world = Box7(step_pose[k]->tx, step_pose[k]->ty, label.box.cz,
                              label.box.width, label.box.length, label.box.height,
                              step_pose[k]->theta);
        // the step box in the source frame's ego coordinates, for cropping
        const Pose2 box_in_ego = compose(inverse(src.ego_pose), *step_pose[k]);
        const Box7 box_ego(box_in_ego.tx, box_in_ego.ty, label.box.cz,
                           label.box.width, label.box.length, label.box.height,
                           box_in_ego.theta);
        step.points = crop_and_canonicalize(src, box_ego, canonical_from_world,
                                            crop_margin);
        step.interpolated = interpolated[k];
        entry.steps.push_back(std::move(step));
      }

      frame_entries[label.object_id] = db.entries.size();
      db.entries.push_back(std::move(entry));
    }

    // Pair linking within the frame.
    for (const FrameLabel& label : current.labels) {
      if (!label.pair_id) continue;
      const auto self_it = frame_entries.find(label.object_id);
      const auto partner_it = frame_entries.find(*label.pair_id);
      if (partner_it == frame_entries.end()) {
        db.broken_pairs.push_back(
            BrokenPairReport{current.frame_id, label.object_id, *label.pair_id});
        continue;
      }
      GtDatabaseEntry& self = db.entries[self_it->second];
      const GtDatabaseEntry& partner = db.entries[partner_it->second];
      self.pair_entry = partner_it->second;
      // relative pose from the recorded world poses of the newest step
      const Pose2 a{self.steps[0].box_world.cx, self.steps[0].box_world.cy,
                    self.steps[0].box_world.yaw};
      const Pose2 b{partner.steps[0].box_world.cx, partner.steps[0].box_world.cy,
                    partner.steps[0].box_world.yaw};
      self.partner_in_canonical = compose(inverse(a), b);
    }
  }
  return db;
}

Box7 paste_points(const GtDatabaseEntry& entry, const Pose2& placement,
                  std::span<LabeledFrame* const> window) {
  const std::size_t n = window.size();
  // target frame pose, for expressing history steps in older frames
  const Pose2& target_world = window.back()->ego_pose;

  for (std::size_t k = 0; k < entry.steps.size() && k < n; ++k) {
    LabeledFrame* dst = window[n - 1 - k];
    const EntryStep& step = entry.steps[k];
    if (step.points.size() == 0) continue;

    // canonical -> target ego -> world -> destination ego
    Pose2 to_dst = placement;
    if (k > 0) {
      to_dst = compose(compose(inverse(dst->ego_pose), target_world), placement);
    }
    PointCloud moved = transform_points(step.points, to_dst);
    if (dst->points.columns.empty()) dst->points.columns = moved.columns;
    if (dst->points.columns != moved.columns) {
      throw ConfigError("paste_points: column mismatch between entry and frame");
    }
    dst->points.data.insert(dst->points.data.end(), moved.data.begin(),
                            moved.data.end());
  }
  return Box7(placement.tx, placement.ty, entry.z_center_m, entry.width_m,
              entry.length_m, entry.height_m, placement.theta);
}

namespace {

bool placement_collides(const Box7& candidate, const std::vector<Box7>& obstacles,
                        double threshold) {
  for (const Box7& other : obstacles) {
    if (rotated_iou_bev(candidate, other) > threshold) return true;
  }
  return false;
}

}  // namespace

AugmentResult sample_and_paste(std::span<LabeledFrame* const> window,
                               const GtDatabase& db, const AugmentConfig& config,
                               Rng& rng) {
  AugmentResult result;
  LabeledFrame& target = *window.back();

  std::int64_t next_id = 0;
  for (const FrameLabel& l : target.labels) next_id = std::max(next_id, l.object_id + 1);

  std::vector<Box7> obstacles;
  obstacles.reserve(target.labels.size());
  for (const FrameLabel& l : target.labels) obstacles.push_back(l.box);

  for (const auto& [class_name, quota] : config.samples_per_class) {
    const std::vector<std::size_t> candidates = db.entries_of_class(class_name);
    if (candidates.empty()) continue;

    for (int q = 0; q < quota; ++q) {
      bool placed = false;
      int attempt = 0;
      for (; attempt < config.max_retries && !placed; ++attempt) {
        const std::size_t entry_idx =
            candidates[rng.uniform_index(candidates.size())];
        const GtDatabaseEntry& entry = db.entries[entry_idx];
        Pose2 placement;
        if (config.use_original_pose) {
          // the recorded scene pose, expressed in the target frame
          const Box7& w = entry.steps[0].box_world;
          placement = compose(inverse(target.ego_pose), Pose2{w.cx, w.cy, w.yaw});
        } else {
          placement = Pose2{rng.uniform(config.place_x_min_m, config.place_x_max_m),
                            rng.uniform(config.place_y_min_m, config.place_y_max_m),
                            rng.uniform(-std::numbers::pi, std::numbers::pi)};
        }

        const Box7 box_a(placement.tx, placement.ty, entry.z_center_m,
                         entry.width_m, entry.length_m, entry.height_m,
                         placement.theta);
        std::optional<Box7> box_b;
        std::optional<Pose2> placement_b;
        if (entry.pair_entry && entry.partner_in_canonical) {
          const GtDatabaseEntry& partner = db.entries[*entry.pair_entry];
          placement_b = compose(placement, *entry.partner_in_canonical);
          box_b = Box7(placement_b->tx, placement_b->ty, partner.z_center_m,
                       partner.width_m, partner.length_m, partner.height_m,
                       placement_b->theta);
        }

        // partners are allowed to overlap each other, nothing else
        if (placement_collides(box_a, obstacles, config.collision_iou_threshold)) continue;
        if (box_b &&
            placement_collides(*box_b, obstacles, config.collision_iou_threshold)) {
          continue;
        }

        paste_points(entry, placement, window);
        const std::int64_t id_a = next_id++;
        PastedObject pasted_a{entry_idx, placement, id_a, 0};
        for (const EntryStep& s : entry.steps) pasted_a.points_added += s.points.size();

        FrameLabel label_a;
        label_a.object_id = id_a;
        label_a.class_name = entry.class_name;
        label_a.box = box_a;

        if (box_b) {
          const GtDatabaseEntry& partner = db.entries[*entry.pair_entry];
          paste_points(partner, *placement_b, window);
          const std::int64_t id_b = next_id++;
          label_a.pair_id = id_b;

          FrameLabel label_b;
          label_b.object_id = id_b;
          label_b.class_name = partner.class_name;
          label_b.pair_id = id_a;
          label_b.box = *box_b;

          target.labels.push_back(label_a);
          target.labels.push_back(label_b);
          obstacles.push_back(box_a);
          obstacles.push_back(*box_b);

          PastedObject pasted_b{*entry.pair_entry, *placement_b, id_b, 0};
          for (const EntryStep& s : partner.steps) pasted_b.points_added += s.points.size();
          result.added.push_back(pasted_a);
          result.added.push_back(pasted_b);
        } else {
          target.labels.push_back(label_a);
          obstacles.push_back(box_a);
          result.added.push_back(pasted_a);
        }
        for (const EntryStep& s : entry.steps) {
          if (s.interpolated) {
            result.interpolated_steps_used.push_back(entry_idx);
            break;
          }
        }
        placed = true;
      }
      if (!placed) {
        result.skipped.push_back(SkipReport{class_name, attempt});
      }
    }
  }
  return result;
}

}  // namespace bevkit
