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


#include "shoptraj/collection/grid.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <utility>

#include "shoptraj/errors.hpp"

namespace shoptraj::collection
{

namespace
{

using Cell = std::pair<long, long>;

}  // namespace

MoveGrid::MoveGrid(const StoreMap & map, double step) : map_(&map), step_(step), origin_(map.entrance())
{
  if (!(step > 0.0)) {
    throw SessionError("invalid_step", "grid step must be positive");
  }
}

Point2 MoveGrid::snap(Point2 p) const
{
  const double i = std::round((p.x - origin_.x) / step_);
  const double j = std::round((p.y - origin_.y) / step_);
  // Rounded to the 1 mm export grid so stored and replayed values agree.
  return {std::round((origin_.x + i * step_) * 1000.0) / 1000.0, std::round((origin_.y + j * step_) * 1000.0) / 1000.0};
}

bool MoveGrid::is_unit_step(Point2 from, Point2 to) const
{
  const double dx = std::abs(to.x - from.x);
  const double dy = std::abs(to.y - from.y);
  constexpr double kTol = 1e-6;
  return (std::abs(dx - step_) < kTol && dy < kTol) || (std::abs(dy - step_) < kTol && dx < kTol);
}

bool MoveGrid::walkable(Point2 p) const { return map_->in_bounds(p) && map_->is_free(p, map_->agent_radius()); }

bool MoveGrid::can_reach(Point2 p, const Item & item) const
{
  return distance(p, item.position) <= map_->reach_distance() && map_->nearest_item(p).id == item.id;
}

std::optional<std::vector<Point2>> MoveGrid::route(Point2 from, const std::function<bool(Point2)> & goal) const
{
  const Point2 start = snap(from);
  auto at = [&](Cell c) {
    return snap({origin_.x + static_cast<double>(c.first) * step_, origin_.y + static_cast<double>(c.second) * step_});
  };
  const Cell s{std::lround((start.x - origin_.x) / step_), std::lround((start.y - origin_.y) / step_)};
  std::map<Cell, Cell> parent{{s, s}};
  std::deque<Cell> queue{s};
  constexpr std::pair<long, long> kDirs[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    if (goal(at(c))) {
      std::vector<Point2> path;
      for (Cell k = c;; k = parent.at(k)) {
        path.push_back(at(k));
        if (k == s) {
          break;
        }
      }
      return std::vector<Point2>(path.rbegin(), path.rend());
    }
    for (const auto & [dx, dy] : kDirs) {
      const Cell n{c.first + dx, c.second + dy};
      if (parent.count(n) == 0 && walkable(at(n))) {
        parent.emplace(n, c);
        queue.push_back(n);
      }
    }
  }
  return std::nullopt;
}

}  // namespace shoptraj::collection
