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

#include "bevkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bevkit/errors.hpp"

namespace bevkit {

namespace {
constexpr double kMinIntersectionArea = 1e-12;  // m^2, tangent boxes count as disjoint
}

double normalize_angle(double rad) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(rad + std::numbers::pi, two_pi);
  if (r <= 0.0) r += two_pi;
  return r - std::numbers::pi;
}

Vec2 rotate(const Vec2& v, double rad) {
  const double c = std::cos(rad);
  const double s = std::sin(rad);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

Box7::Box7(double cx, double cy, double cz, double width, double length,
           double height, double yaw)
    : cx(cx), cy(cy), cz(cz), width(width), length(length), height(height),
      yaw(normalize_angle(yaw)) {}

Pose2 compose(const Pose2& a, const Pose2& b) {
  const Vec2 t = apply(a, Vec2{b.tx, b.ty});
  return Pose2{t.x, t.y, normalize_angle(a.theta + b.theta)};
}

Pose2 inverse(const Pose2& p) {
  const Vec2 t = rotate(Vec2{-p.tx, -p.ty}, -p.theta);
  return Pose2{t.x, t.y, normalize_angle(-p.theta)};
}

Vec2 apply(const Pose2& p, const Vec2& v) {
  const Vec2 r = rotate(v, p.theta);
  return {r.x + p.tx, r.y + p.ty};
}

double ConvexPolygon::area() const {
  if (vertices.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % vertices.size()];
    twice += a.x * b.y - a.y * b.x;
  }
  return 0.5 * twice;
}

bool ConvexPolygon::contains(const Vec2& p) const {
  if (vertices.size() < 3) return false;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % vertices.size()];
    if (cross(b - a, p - a) < -1e-12) return false;
  }
  return true;
}

bool ConvexPolygon::is_valid() const {
  if (vertices.size() < 3) return false;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
    const Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    if (cross(e0, e1) < -1e-9) return false;
  }
  return true;
}

ConvexPolygon box_to_bev_polygon(const Box7& box) {
  const double hl = 0.5 * box.length;
  const double hw = 0.5 * box.width;
  // CCW in the box frame, front-left first.
  const Vec2 local[4] = {{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}};
  ConvexPolygon poly;
  poly.vertices.reserve(4);
  const Vec2 c{box.cx, box.cy};
  for (const Vec2& v : local) poly.vertices.push_back(c + rotate(v, box.yaw));
  return poly;
}

ConvexPolygon clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip) {
  std::vector<Vec2> output = subject.vertices;
  const std::size_t m = clip.vertices.size();
  for (std::size_t i = 0; i < m && !output.empty(); ++i) {
    const Vec2 a = clip.vertices[i];
    const Vec2 b = clip.vertices[(i + 1) % m];
    const Vec2 edge = b - a;

    std::vector<Vec2> input;
    input.swap(output);
    const std::size_t n = input.size();
    for (std::size_t j = 0; j < n; ++j) {
      const Vec2& cur = input[j];
      const Vec2& nxt = input[(j + 1) % n];
      const double side_cur = cross(edge, cur - a);
      const double side_nxt = cross(edge, nxt - a);
      const bool in_cur = side_cur >= 0.0;
      const bool in_nxt = side_nxt >= 0.0;
      if (in_cur) output.push_back(cur);
      if (in_cur != in_nxt) {
        const double t = side_cur / (side_cur - side_nxt);
        output.push_back(cur + (nxt - cur) * t);
      }
    }
  }
  return ConvexPolygon{std::move(output)};
}

double rotated_iou_bev(const Box7& a, const Box7& b) {
  const ConvexPolygon pa = box_to_bev_polygon(a);
  const ConvexPolygon pb = box_to_bev_polygon(b);
  const double area_a = pa.area();
  const double area_b = pb.area();
  if (!(area_a > 0.0) || !(area_b > 0.0)) {
    throw DegenerateBox("rotated_iou_bev: zero-area box footprint");
  }
  const double inter = clip_convex(pa, pb).area();
  if (inter < kMinIntersectionArea) return 0.0;
  return inter / (area_a + area_b - inter);
}

namespace {

struct Rect {
  double x_min, x_max, y_min, y_max;
  double area() const { return (x_max - x_min) * (y_max - y_min); }
};

Rect footprint_bounding_rect(const Box7& box) {
  const ConvexPolygon poly = box_to_bev_polygon(box);
  Rect r{poly.vertices[0].x, poly.vertices[0].x, poly.vertices[0].y,
         poly.vertices[0].y};
  for (const Vec2& v : poly.vertices) {
    r.x_min = std::min(r.x_min, v.x);
    r.x_max = std::max(r.x_max, v.x);
    r.y_min = std::min(r.y_min, v.y);
    r.y_max = std::max(r.y_max, v.y);
  }
  return r;
}

}  // namespace

double axis_aligned_iou_bev(const Box7& a, const Box7& b) {
  if (!(a.footprint_area() > 0.0) || !(b.footprint_area() > 0.0)) {
    throw DegenerateBox("axis_aligned_iou_bev: zero-area box footprint");
  }
  const Rect ra = footprint_bounding_rect(a);
  const Rect rb = footprint_bounding_rect(b);
  const double ix = std::min(ra.x_max, rb.x_max) - std::max(ra.x_min, rb.x_min);
  const double iy = std::min(ra.y_max, rb.y_max) - std::max(ra.y_min, rb.y_min);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  return inter / (ra.area() + rb.area() - inter);
}

std::vector<std::size_t> points_in_box(std::span<const double> xs,
                                       std::span<const double> ys,
                                       std::span<const double> zs,
                                       const Box7& box, double margin) {
  std::vector<std::size_t> out;
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double half_l = 0.5 * box.length + margin;
  const double half_w = 0.5 * box.width + margin;
  const double half_h = 0.5 * box.height + margin;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - box.cx;
    const double dy = ys[i] - box.cy;
    const double bx = c * dx + s * dy;
    const double by = -s * dx + c * dy;
    if (std::abs(bx) <= half_l && std::abs(by) <= half_w &&
        std::abs(zs[i] - box.cz) <= half_h) {
      out.push_back(i);
    }
  }
  return out;
}

Box7 transform_box(const Pose2& pose, const Box7& box) {
  const Vec2 c = apply(pose, Vec2{box.cx, box.cy});
  return Box7(c.x, c.y, box.cz, box.width, box.length, box.height,
              box.yaw + pose.theta);
}

}  // namespace bevkit
