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
#include <string>
#include <vector>

#include "bevkit/frame.hpp"
#include "bevkit/geometry.hpp"

namespace bevkit {

enum class MatchMode { center_distance, face_alignment };

/// Detection scoring configuration. Classes inside one group tolerate
/// each other's labels during matching: a detection may claim any ground
/// truth of its group, and a matched ground truth counts as found for its
/// own class no matter which group member's label the detection carried.
struct EvalConfig {
  std::map<std::string, std::vector<std::string>> groups;
  std::vector<std::string> evaluated_classes;
  MatchMode match_mode = MatchMode::center_distance;
  std::vector<double> match_thresholds_m = {0.5, 1.0, 2.0, 4.0};
  double max_range_m = 96.0;
  std::map<std::string, double> max_range_overrides_m;
  int min_points_auto_nlz = 5;

  static EvalConfig defaults();
  std::optional<std::string> group_of(const std::string& class_name) const;
  double range_for(const std::string& class_name) const;
};

struct EvalGtBox {
  Box7 box;
  std::string class_name;
  std::int64_t object_id = -1;
  /// Points inside the box in its frame; negative when unknown (no
  /// automatic zone conversion then).
  int point_count = -1;
};

struct EvalDetection {
  Box7 box;
  std::string class_name;
  double confidence = 0.0;
};

struct EvalFrame {
  std::vector<EvalGtBox> gt;
  std::vector<EvalDetection> detections;
  std::vector<NoLabelZone> zones;
};

/// Outcome of the no-label-zone pass over one frame.
struct NlzFilterResult {
  std::vector<EvalGtBox> gt;
  std::vector<EvalDetection> detections;
  std::vector<NoLabelZone> zones;  // input zones plus auto conversions

  struct Removal {
    enum class Kind { gt_auto_zoned, gt_in_manual_zone, detection_in_zone } kind;
    std::int64_t object_id = -1;    // for gt removals
    std::string class_name;
  };
  std::vector<Removal> ledger;
};

/// Converts low-point ground truths into zones, then removes detections
/// whose center falls inside any zone and ground truths whose center
/// falls inside a manual zone. Every removal is recorded.
NlzFilterResult apply_no_label_zones(const std::vector<EvalGtBox>& gt,
                                     const std::vector<EvalDetection>& detections,
                                     const std::vector<NoLabelZone>& zones,
                                     int min_points);

/// detection_to_gt[i] is the matched index into gt, or -1. Detections are
/// processed in descending confidence; each claims the nearest unmatched
/// ground truth of its class group within the threshold.
struct MatchResult {
  std::vector<int> detection_to_gt;
};

MatchResult match_center_distance(const std::vector<EvalGtBox>& gt,
                                  const std::vector<EvalDetection>& detections,
                                  double threshold_m, const EvalConfig& config);

/// Same greedy scheme, but the pair distance is the minimum over the four
/// front/rear face-midpoint combinations, so a detection with the wrong
/// length still matches when one face lines up.
MatchResult match_face_alignment(const std::vector<EvalGtBox>& gt,
                                 const std::vector<EvalDetection>& detections,
                                 double threshold_m, const EvalConfig& config);

/// Midpoints of the two faces perpendicular to the heading, at mid
/// height. first = front (+heading side).
std::pair<Vec2, Vec2> face_midpoints(const Box7& box);

struct MatchEvent {
  double confidence = 0.0;
  bool true_positive = false;
};

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
  double confidence = 0.0;
};

struct ApResult {
  double ap = 0.0;
  std::vector<PrPoint> pr;
};

/// Average precision from a confidence-ranked event stream: mean of the
/// right-envelope interpolated precision over recall 0.10..1.00 in 0.01
/// steps. Returns nullopt when gt_count is zero (undefined, not zero).
std::optional<ApResult> compute_ap(std::vector<MatchEvent> events, int gt_count);

struct ClassCounts {
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

struct ClassEvalResult {
  std::string class_name;
  std::optional<double> ap;  // mean over thresholds; absent without gt
  int gt_count = 0;
  int ignored_detections = 0;
  int ignored_gt = 0;
  std::map<double, ClassCounts> counts;            // per threshold
  std::map<double, std::vector<PrPoint>> pr_curves;  // per threshold
};

struct EvalReport {
  std::vector<ClassEvalResult> per_class;
  /// Mean over the evaluated classes whose AP is defined.
  std::optional<double> mean_ap;
};

/// Full pipeline: range cap, no-label zones, per-frame group matching at
/// every threshold, confidence-merged PR accumulation, per-class AP.
EvalReport evaluate_frames(const std::vector<EvalFrame>& frames,
                           const EvalConfig& config);

}  // namespace bevkit
