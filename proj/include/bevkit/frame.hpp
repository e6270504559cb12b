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
#include "bevkit/point_cloud.hpp"

namespace bevkit {

/// One labeled object in one frame, in that frame's ego coordinates.
struct FrameLabel {
  std::int64_t object_id = -1;
  std::string class_name;
  std::optional<std::int64_t> pair_id;
  Box7 box;
};

/// Region excluded from scoring, with how it came to exist.
struct NoLabelZone {
  ConvexPolygon region;
  enum class Origin { manual, auto_low_points } origin = Origin::manual;
};

/// Fully loaded frame: points, labels and no-label zones in ego
/// coordinates plus the ego pose that places them in the world.
struct LabeledFrame {
  std::int64_t frame_id = 0;
  double timestamp_s = 0.0;
  Pose2 ego_pose;  // world <- ego
  PointCloud points;
  std::vector<FrameLabel> labels;
  std::vector<NoLabelZone> zones;
};

}  // namespace bevkit
