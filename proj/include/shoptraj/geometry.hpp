// Copyright 2026 The shoptraj Authors
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

#ifndef SHOPTRAJ_GEOMETRY_HPP_
#define SHOPTRAJ_GEOMETRY_HPP_

#include <algorithm>
#include <cmath>

namespace shoptraj
{

struct Point2
{
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
  friend bool operator==(const Point2 &, const Point2 &) = default;
};

inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Wraps an angle to (-pi, pi].
inline double normalize_angle(double a)
{
  a = std::remainder(a, 2.0 * M_PI);
  return a <= -M_PI ? a + 2.0 * M_PI : a;
}

/// Axis-aligned rectangle, min corner inclusive.
struct Rect
{
  Point2 min;
  Point2 max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double area() const { return width() * height(); }
  Point2 center() const { return {(min.x + max.x) * 0.5, (min.y + max.y) * 0.5}; }

  bool contains(Point2 p) const
  {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }

  /// Euclidean distance from p to the rectangle; 0 inside.
  double distance_to(Point2 p) const
  {
    const double dx = std::max({min.x - p.x, 0.0, p.x - max.x});
    const double dy = std::max({min.y - p.y, 0.0, p.y - max.y});
    return std::hypot(dx, dy);
  }

  /// True when the interiors overlap (touching edges do not count).
  bool overlaps(const Rect & o) const
  {
    return min.x < o.max.x && o.min.x < max.x && min.y < o.max.y && o.min.y < max.y;
  }

  friend bool operator==(const Rect &, const Rect &) = default;
};

}  // namespace shoptraj

#endif  // SHOPTRAJ_GEOMETRY_HPP_
