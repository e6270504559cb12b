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

#include "bevkit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bevkit {

EvalConfig EvalConfig::defaults() {
  EvalConfig cfg;
  cfg.groups = {{"vehicle", {"car", "truck", "semi_trailer"}},
                {"vru", {"pedestrian", "cyclist"}}};
  cfg.evaluated_classes = {"car", "truck", "pedestrian", "cyclist"};
  return cfg;
}

std::optional<std::string> EvalConfig::group_of(const std::string& class_name) const {
  for (const auto& [group, members] : groups) {
    if (std::find(members.begin(), members.end(), class_name) != members.end()) {
      return group;
    }
  }
  return std::nullopt;
}

double EvalConfig::range_for(const std::string& class_name) const {
  const auto it = max_range_overrides_m.find(class_name);
  return it != max_range_overrides_m.end() ? it->second : max_range_m;
}

NlzFilterResult apply_no_label_zones(const std::vector<EvalGtBox>& gt,
                                     const std::vector<EvalDetection>& detections,
                                     const std::vector<NoLabelZone>& zones,
                                     int min_points) {
  NlzFilterResult out;
  out.zones = zones;

  for (const EvalGtBox& g : gt) {
    if (g.point_count >= 0 && g.point_count < min_points) {
      NoLabelZone zone;
      zone.region = box_to_bev_polygon(g.box);
      zone.origin = NoLabelZone::Origin::auto_low_points;
      out.zones.push_back(std::move(zone));
      out.ledger.push_back({NlzFilterResult::Removal::Kind::gt_auto_zoned,
                            g.object_id, g.class_name});
      continue;
    }
    bool in_manual = false;
    for (const NoLabelZone& z : zones) {
      if (z.origin == NoLabelZone::Origin::manual &&
          z.region.contains(Vec2{g.box.cx, g.box.cy})) {
        in_manual = true;
        break;
      }
    }
    if (in_manual) {
      out.ledger.push_back({NlzFilterResult::Removal::Kind::gt_in_manual_zone,
                            g.object_id, g.class_name});
    } else {
      out.gt.push_back(g);
    }
  }

  for (const EvalDetection& d : detections) {
    bool in_zone = false;
    for (const NoLabelZone& z : out.zones) {
      if (z.region.contains(Vec2{d.box.cx, d.box.cy})) {
        in_zone = true;
        break;
      }
    }
    if (in_zone) {
      out.ledger.push_back(
          {NlzFilterResult::Removal::Kind::detection_in_zone, -1, d.class_name});
    } else {
      out.detections.push_back(d);
    }
  }
  return out;
}

std::pair<Vec2, Vec2> face_midpoints(const Box7& box) {
  const Vec2 heading = rotate(Vec2{0.5 * box.length, 0.0}, box.yaw);
  const Vec2 c{box.cx, box.cy};
  return {c + heading, c - heading};
}

namespace {

double center_distance(const Box7& a, const Box7& b) {
  return std::hypot(a.cx - b.cx, a.cy - b.cy);
}

double min_face_distance(const Box7& a, const Box7& b) {
  const auto [fa, ra] = face_midpoints(a);
  const auto [fb, rb] = face_midpoints(b);
  const Vec2 av[2] = {fa, ra};
  const Vec2 bv[2] = {fb, rb};
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& p : av) {
    for (const Vec2& q : bv) {
      best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
    }
  }
  return best;
}

MatchResult greedy_match(const std::vector<EvalGtBox>& gt,
                         const std::vector<EvalDetection>& detections,
                         double threshold_m, const EvalConfig& config,
                         double (*distance)(const Box7&, const Box7&)) {
  MatchResult result;
  result.detection_to_gt.assign(detections.size(), -1);

  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].confidence > detections[b].confidence;
  });

  std::vector<bool> gt_taken(gt.size(), false);
  for (const std::size_t di : order) {
    const EvalDetection& det = detections[di];
    const auto det_group = config.group_of(det.class_name);

    double best_d = threshold_m;
    int best_g = -1;
    for (std::size_t gi = 0; gi < gt.size(); ++gi) {
      if (gt_taken[gi]) continue;
      const auto gt_group = config.group_of(gt[gi].class_name);
      const bool compatible = det_group && gt_group
                                  ? *det_group == *gt_group
                                  : det.class_name == gt[gi].class_name;
      if (!compatible) continue;
      const double d = distance(det.box, gt[gi].box);
      if (d <= best_d && (best_g < 0 || d < best_d)) {
        best_d = d;
        best_g = static_cast<int>(gi);
      }
    }
    if (best_g >= 0) {
      gt_taken[best_g] = true;
      result.detection_to_gt[di] = best_g;
    }
  }
  return result;
}

}  // namespace

MatchResult match_center_distance(const std::vector<EvalGtBox>& gt,
                                  const std::vector<EvalDetection>& detections,
                                  double threshold_m, const EvalConfig& config) {
  return greedy_match(gt, detections, threshold_m, config, &center_distance);
}

MatchResult match_face_alignment(const std::vector<EvalGtBox>& gt,
                                 const std::vector<EvalDetection>& detections,
                                 double threshold_m, const EvalConfig& config) {
  return greedy_match(gt, detections, threshold_m, config, &min_face_distance);
}

std::optional<ApResult> compute_ap(std::vector<MatchEvent> events, int gt_count) {
  if (gt_count <= 0) return std::nullopt;

  std::stable_sort(events.begin(), events.end(),
                   [](const MatchEvent& a, const MatchEvent& b) {
                     return a.confidence > b.confidence;
                   });

  ApResult result;
  result.pr.reserve(events.size());
  int tp = 0;
  int fp = 0;
  for (const MatchEvent& e : events) {
    if (e.true_positive) {
      ++tp;
    } else {
      ++fp;
    }
    PrPoint p;
    p.recall = static_cast<double>(tp) / gt_count;
    p.precision = static_cast<double>(tp) / (tp + fp);
    p.confidence = e.confidence;
    result.pr.push_back(p);
  }

  // Right-envelope interpolation over the sampled recall grid.
  double ap_sum = 0.0;
  for (int k = 10; k <= 100; ++k) {
    const double r = k / 100.0;
    double best = 0.0;
    for (const PrPoint& p : result.pr) {
      if (p.recall >= r - 1e-12) best = std::max(best, p.precision);
    }
    ap_sum += best;
  }
  result.ap = ap_sum / 91.0;
  return result;
}

EvalReport evaluate_frames(const std::vector<EvalFrame>& frames,
                           const EvalConfig& config) {
  // Event streams and counters keyed by class, one per threshold.
  struct ClassAccum {
    std::map<double, std::vector<MatchEvent>> events;
    std::map<double, ClassCounts> counts;
    int gt_count = 0;
    int ignored_detections = 0;
    int ignored_gt = 0;
  };
  std::map<std::string, ClassAccum> accum;
  for (const std::string& cls : config.evaluated_classes) accum[cls];

  for (const EvalFrame& frame : frames) {
    // Range cap first: beyond-range objects are excluded, not missed.
    std::vector<EvalGtBox> gt;
    for (const EvalGtBox& g : frame.gt) {
      if (std::hypot(g.box.cx, g.box.cy) <= config.range_for(g.class_name)) {
        gt.push_back(g);
      }
    }
    std::vector<EvalDetection> det;
    for (const EvalDetection& d : frame.detections) {
      if (std::hypot(d.box.cx, d.box.cy) <= config.range_for(d.class_name)) {
        det.push_back(d);
      }
    }

    const NlzFilterResult filtered =
        apply_no_label_zones(gt, det, frame.zones, config.min_points_auto_nlz);
    for (const auto& removal : filtered.ledger) {
      auto it = accum.find(removal.class_name);
      if (it == accum.end()) continue;
      if (removal.kind == NlzFilterResult::Removal::Kind::detection_in_zone) {
        it->second.ignored_detections += 1;
      } else {
        it->second.ignored_gt += 1;
      }
    }

    for (const EvalGtBox& g : filtered.gt) {
      auto it = accum.find(g.class_name);
      if (it != accum.end()) it->second.gt_count += 1;
    }

    for (const double thr : config.match_thresholds_m) {
      const MatchResult match =
          config.match_mode == MatchMode::center_distance
              ? match_center_distance(filtered.gt, filtered.detections, thr, config)
              : match_face_alignment(filtered.gt, filtered.detections, thr, config);

      std::vector<bool> gt_matched(filtered.gt.size(), false);
      for (std::size_t di = 0; di < filtered.detections.size(); ++di) {
        const int gi = match.detection_to_gt[di];
        if (gi >= 0) {
          gt_matched[gi] = true;
          // A found ground truth counts for its own class, whichever
          // group member's label the detection carried.
          auto it = accum.find(filtered.gt[gi].class_name);
          if (it != accum.end()) {
            it->second.events[thr].push_back(
                MatchEvent{filtered.detections[di].confidence, true});
            it->second.counts[thr].tp += 1;
          }
        } else {
          // An unmatched detection is a false positive of its own class.
          auto it = accum.find(filtered.detections[di].class_name);
          if (it != accum.end()) {
            it->second.events[thr].push_back(
                MatchEvent{filtered.detections[di].confidence, false});
            it->second.counts[thr].fp += 1;
          }
        }
      }
      for (std::size_t gi = 0; gi < filtered.gt.size(); ++gi) {
        if (gt_matched[gi]) continue;
        auto it = accum.find(filtered.gt[gi].class_name);
        if (it != accum.end()) it->second.counts[thr].fn += 1;
      }
    }
  }

  EvalReport report;
  double ap_sum = 0.0;
  int ap_defined = 0;
  for (const std::string& cls : config.evaluated_classes) {
    ClassAccum& a = accum[cls];
    ClassEvalResult r;
    r.class_name = cls;
    r.gt_count = a.gt_count;
    r.ignored_detections = a.ignored_detections;
    r.ignored_gt = a.ignored_gt;
    r.counts = a.counts;

    double threshold_ap_sum = 0.0;
    int threshold_ap_count = 0;
    for (const double thr : config.match_thresholds_m) {
      const auto ap = compute_ap(a.events[thr], a.gt_count);
      if (ap) {
        threshold_ap_sum += ap->ap;
        threshold_ap_count += 1;
        r.pr_curves[thr] = ap->pr;
      }
    }
    if (threshold_ap_count > 0) {
      r.ap = threshold_ap_sum / threshold_ap_count;
      ap_sum += *r.ap;
      ap_defined += 1;
    }
    report.per_class.push_back(std::move(r));
  }
  if (ap_defined > 0) report.mean_ap = ap_sum / ap_defined;
  return report;
}

}  // namespace bevkit
