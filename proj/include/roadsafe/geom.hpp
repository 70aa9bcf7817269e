// Copyright 2026 The Roadsafe Authors
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

#ifndef ROADSAFE_GEOM_HPP_
#define ROADSAFE_GEOM_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace roadsafe {

struct Vec2 {
  double x{0.0};
  double y{0.0};

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  Vec2 rotated(double angle) const {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
  }
};

struct Vec3 {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  Vec2 xy() const { return {x, y}; }
};

/// Normalizes an angle to (-pi, pi].
inline double normalize_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

inline constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

/// Oriented rectangle in the BEV plane.
struct OrientedRect {
  Vec2 center;
  Vec2 half_dims;  // (half length, half width)
  double yaw{0.0};

  std::array<Vec2, 4> corners() const {
    const Vec2 ax = Vec2{1.0, 0.0}.rotated(yaw);
    const Vec2 ay = Vec2{0.0, 1.0}.rotated(yaw);
    const Vec2 ex = ax * half_dims.x;
    const Vec2 ey = ay * half_dims.y;
    return {center + ex + ey, center - ex + ey, center - ex - ey,
            center + ex - ey};
  }
};

namespace detail {

// Projects both rects on `axis` and reports whether the intervals are
// separated by more than `tol`.
inline bool separated_on_axis(const OrientedRect& a, const OrientedRect& b,
                              const Vec2& axis, double tol) {
  const double center_gap = std::abs((b.center - a.center).dot(axis));
  auto extent = [&axis](const OrientedRect& r) {
    const Vec2 ax = Vec2{1.0, 0.0}.rotated(r.yaw);
    const Vec2 ay = Vec2{0.0, 1.0}.rotated(r.yaw);
    return std::abs(ax.dot(axis)) * r.half_dims.x +
           std::abs(ay.dot(axis)) * r.half_dims.y;
  };
  return center_gap > extent(a) + extent(b) + tol;
}

}  // namespace detail

/// Separating-axis overlap test. Touching boundaries within 1e-9 m count
/// as contact.
inline bool obb_intersect(const OrientedRect& a, const OrientedRect& b) {
  constexpr double kTol = 1e-9;
  const Vec2 axes[4] = {Vec2{1.0, 0.0}.rotated(a.yaw),
                        Vec2{0.0, 1.0}.rotated(a.yaw),
                        Vec2{1.0, 0.0}.rotated(b.yaw),
                        Vec2{0.0, 1.0}.rotated(b.yaw)};
  for (const Vec2& axis : axes) {
    if (detail::separated_on_axis(a, b, axis, kTol)) return false;
  }
  return true;
}

/// Point containment for a convex polygon in CCW or CW order.
inline bool point_in_convex_polygon(const Vec2& p,
                                    const std::vector<Vec2>& poly) {
  if (poly.size() < 3) return false;
  int sign = 0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    const double c = (b - a).cross(p - a);
    if (c > 1e-12) {
      if (sign < 0) return false;
      sign = 1;
    } else if (c < -1e-12) {
      if (sign > 0) return false;
      sign = -1;
    }
  }
  return true;
}

inline double polygon_area(const std::vector<Vec2>& poly) {
  double twice = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    twice += poly[i].cross(poly[(i + 1) % poly.size()]);
  }
  return std::abs(twice) * 0.5;
}

/// Sutherland-Hodgman clip of a convex `subject` against a convex CCW
/// `clip` polygon.
inline std::vector<Vec2> clip_convex(std::vector<Vec2> subject,
                                     const std::vector<Vec2>& clip) {
  for (size_t i = 0; i < clip.size() && !subject.empty(); ++i) {
    const Vec2 a = clip[i];
    const Vec2 b = clip[(i + 1) % clip.size()];
    const Vec2 edge = b - a;
    std::vector<Vec2> out;
    out.reserve(subject.size() + 2);
    for (size_t j = 0; j < subject.size(); ++j) {
      const Vec2 p = subject[j];
      const Vec2 q = subject[(j + 1) % subject.size()];
      const double dp = edge.cross(p - a);
      const double dq = edge.cross(q - a);
      if (dp >= 0.0) out.push_back(p);
      if ((dp > 0.0 && dq < 0.0) || (dp < 0.0 && dq > 0.0)) {
        const double t = dp / (dp - dq);
        out.push_back(p + (q - p) * t);
      }
    }
    subject = std::move(out);
  }
  return subject;
}

/// Corners as a CCW polygon (corners() already walks CCW for yaw = 0).
inline std::vector<Vec2> rect_polygon(const OrientedRect& r) {
  const auto c = r.corners();
  return {c[0], c[1], c[2], c[3]};
}

inline double rect_overlap_area(const OrientedRect& a, const OrientedRect& b) {
  if (!obb_intersect(a, b)) return 0.0;
  return polygon_area(clip_convex(rect_polygon(a), rect_polygon(b)));
}

/// Distance from point to segment [a, b].
inline double point_segment_distance(const Vec2& p, const Vec2& a,
                                     const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

inline double point_polyline_distance(const Vec2& p,
                                      const std::vector<Vec2>& line) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < line.size(); ++i) {
    best = std::min(best, point_segment_distance(p, line[i], line[i + 1]));
  }
  if (line.size() == 1) best = (p - line[0]).norm();
  return best;
}

}  // namespace roadsafe

#endif  // ROADSAFE_GEOM_HPP_
