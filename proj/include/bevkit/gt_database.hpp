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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bevkit/frame.hpp"
#include "bevkit/geometry.hpp"
#include "bevkit/rng.hpp"

namespace bevkit {

/// One temporal step of a database entry. Everything is expressed in the
/// entry's canonical frame: the object's newest box pose mapped to the
/// origin with heading along +x. Step 0 is the source frame; step k was
/// cropped k frames earlier with that step's own box.
struct EntryStep {
  Pose2 pose_in_canonical;  // step box pose relative to the newest box
  Box7 box_world;           // step box in world coordinates (bookkeeping)
  PointCloud points;        // cropped points, canonical coordinates
  bool interpolated = false;
};

struct GtDatabaseEntry {
  std::int64_t entry_id = -1;
  std::int64_t source_frame_id = -1;
  std::int64_t object_id = -1;
  std::string class_name;
  double width_m = 0.0;
  double length_m = 0.0;
  double height_m = 0.0;
  double z_center_m = 0.0;
  std::vector<EntryStep> steps;  // step 0 first, never empty
  std::optional<std::size_t> pair_entry;      // index into GtDatabase::entries
  std::optional<Pose2> partner_in_canonical;  // partner pose in this frame

  Box7 canonical_box() const {
    return Box7(0.0, 0.0, z_center_m, width_m, length_m, height_m, 0.0);
  }
  /// The step's box expressed in the canonical frame.
  Box7 step_box_canonical(std::size_t step) const;
};

struct BrokenPairReport {
  std::int64_t frame_id = -1;
  std::int64_t object_id = -1;
  std::int64_t pair_id = -1;
};

struct GtDatabase {
  std::vector<GtDatabaseEntry> entries;
  std::vector<BrokenPairReport> broken_pairs;

  std::vector<std::size_t> entries_of_class(const std::string& class_name) const;
};

/// Builds one entry per (frame, labeled object), cropping each temporal
/// step with that step's own box so points of moving objects are kept in
/// full. Missing intermediate labels are bridged by linear interpolation
/// of (x, y, unwrapped yaw) in the world frame; such steps are flagged.
/// Labels with a pair id get mutual links with the partner's relative
/// pose recorded at the newest step.
GtDatabase build_database(const std::vector<LabeledFrame>& frames, int n_history,
                          double crop_margin = 0.0);

struct AugmentConfig {
  /// Number of objects to add per class per frame.
  std::map<std::string, int> samples_per_class;
  /// A candidate placement is rejected when its BEV IoU against any
  /// existing or already pasted non-partner box exceeds this.
  double collision_iou_threshold = 0.0;
  double place_x_min_m = -40.0;
  double place_x_max_m = 40.0;
  double place_y_min_m = -40.0;
  double place_y_max_m = 40.0;
  int max_retries = 20;
  /// Paste entries at their recorded world pose instead of sampling a
  /// placement (still collision-checked).
  bool use_original_pose = false;
  /// Epoch after which a training loop should stop sampling. Metadata
  /// only; nothing here consumes it.
  std::optional<int> fading_epoch;
  std::uint64_t seed = 0;
};

struct SkipReport {
  std::string class_name;
  int attempts = 0;
};

struct PastedObject {
  std::size_t entry_index = 0;
  Pose2 placement;  // canonical -> target frame coordinates
  std::int64_t object_id = -1;
  std::size_t points_added = 0;
};

struct AugmentResult {
  std::vector<PastedObject> added;  // partners included
  std::vector<SkipReport> skipped;
  std::vector<std::size_t> interpolated_steps_used;  // entry indices
};

/// Appends the entry's per-step points, transformed by placement, to the
/// matching frames of the window (oldest first, target frame last; steps
/// older than the window are dropped). Returns the step-0 box at the
/// placement pose, in target-frame coordinates.
Box7 paste_points(const GtDatabaseEntry& entry, const Pose2& placement,
                  std::span<LabeledFrame* const> window);

/// Draws entries per class quota and pastes them into the target frame
/// (the last window element) at collision-checked uniform placements.
/// An entry with a pair link brings its partner along at the stored
/// relative pose; the two partners are exempt from mutual collision
/// checking. Placements failing max_retries times are skipped and
/// reported, never fatal.
AugmentResult sample_and_paste(std::span<LabeledFrame* const> window,
                               const GtDatabase& db, const AugmentConfig& config,
                               Rng& rng);

}  // namespace bevkit
