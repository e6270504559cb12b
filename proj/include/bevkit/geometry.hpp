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

#include <cstddef>
#include <span>
#include <vector>

namespace bevkit {

/// Maps any angle to the canonical interval (-pi, pi].
double normalize_angle(double rad);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/// Rotates v by angle rad about the origin.
Vec2 rotate(const Vec2& v, double rad);

/// 7-DoF 3D bounding box. Length runs along the heading (+x of the box
/// frame at yaw 0), width across it, yaw is measured about +z from the +x
/// axis. The parameterized constructor normalizes yaw to (-pi, pi];
/// dimension positivity is checked by the operations that require it so
/// that degenerate boxes coming from files stay representable.
struct Box7 {
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;
  double width = 0.0;
  double length = 0.0;
  double height = 0.0;
  double yaw = 0.0;

  Box7() = default;
  Box7(double cx, double cy, double cz, double width, double length,
       double height, double yaw);

  double footprint_area() const { return width * length; }
  bool has_positive_dims() const {
    return width > 0.0 && length > 0.0 && height > 0.0;
  }
};

/// Rigid transform in the ground plane: rotate by theta, then translate.
struct Pose2 {
  double tx = 0.0;
  double ty = 0.0;
  double theta = 0.0;
};

/// compose(a, b) applies b first, then a.
Pose2 compose(const Pose2& a, const Pose2& b);
Pose2 inverse(const Pose2& p);
Vec2 apply(const Pose2& p, const Vec2& v);

/// Componentwise scaling of a planar twist; used to advance points by a
/// per-second ego motion rate over a time offset.
inline Pose2 scale_twist(const Pose2& rate, double dt) {
  return Pose2{rate.tx * dt, rate.ty * dt, rate.theta * dt};
}

/// Counter-clockwise convex polygon.
struct ConvexPolygon {
  std::vector<Vec2> vertices;

  double area() const;
  bool contains(const Vec2& p) const;
  /// True when >=3 vertices and all consecutive edge cross products
  /// are >= -1e-9 (convex, CCW).
  bool is_valid() const;
};

/// Footprint of the box in the ground plane: 4 corners, CCW, starting at
/// the front-left corner (+length/2, +width/2 in the box frame).
ConvexPolygon box_to_bev_polygon(const Box7& box);

/// Intersection of two convex CCW polygons (Sutherland-Hodgman clipping).
ConvexPolygon clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip);

/// Ground-plane IoU of the two rotated footprints. Throws DegenerateBox
/// when either footprint has non-positive area. Intersections below
/// 1e-12 m^2 count as zero.
double rotated_iou_bev(const Box7& a, const Box7& b);

/// IoU of the axis-aligned bounding rectangles of the two footprints.
/// This is the matching rule of classic fixed-orientation anchor grids;
/// a rotated box inflates its own rectangle and loses overlap.
double axis_aligned_iou_bev(const Box7& a, const Box7& b);

/// Indices of points whose box-frame coordinates lie within the box
/// extents plus margin on every axis. xs/ys/zs are parallel arrays.
std::vector<std::size_t> points_in_box(std::span<const double> xs,
                                       std::span<const double> ys,
                                       std::span<const double> zs,
                                       const Box7& box, double margin);

/// Transforms a box by a ground-plane rigid motion.
Box7 transform_box(const Pose2& pose, const Box7& box);

}  // namespace bevkit
