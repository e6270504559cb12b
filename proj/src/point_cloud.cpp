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

#include "bevkit/point_cloud.hpp"

#include <algorithm>
#include <cassert>

namespace bevkit {

PointCloud PointCloud::with_standard_columns() {
  PointCloud cloud;
  cloud.columns = {kColX,       kColY,          kColZ,
                   kColIntensity, kColTimeOffset, kColDistVru,
                   kColDistVehicle, kColCamDepth};
  return cloud;
}

std::optional<std::size_t> PointCloud::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns.begin());
}

void PointCloud::append_row(const std::vector<double>& values) {
  assert(values.size() == columns.size());
  data.insert(data.end(), values.begin(), values.end());
}

std::vector<double> PointCloud::column(std::size_t col) const {
  std::vector<double> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i, col));
  return out;
}

PointCloud transform_points(const PointCloud& cloud, const Pose2& pose) {
  PointCloud out = cloud;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec2 p = apply(pose, Vec2{out.x(i), out.y(i)});
    out.at(i, 0) = p.x;
    out.at(i, 1) = p.y;
  }
  return out;
}

}  // namespace bevkit
