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


#ifndef SHOPTRAJ_COLLECTION_GRID_HPP_
#define SHOPTRAJ_COLLECTION_GRID_HPP_

#include <functional>
#include <optional>
#include <vector>

#include "shoptraj/geometry.hpp"
#include "shoptraj/store_map.hpp"

namespace shoptraj::collection
{

inline constexpr double kDefaultGridStep = 0.5;

/// Keyboard movement lattice anchored at the map entrance.
class MoveGrid
{
public:
  MoveGrid(const StoreMap & map, double step = kDefaultGridStep);

  double step() const { return step_; }

  /// Nearest lattice point.
  Point2 snap(Point2 p) const;

  /// True when `to` is one lattice step from `from` along x or y.
  bool is_unit_step(Point2 from, Point2 to) const;

  /// Lattice points reachable with 4-directional steps through free space.
  bool walkable(Point2 p) const;

  /// Shortest 4-directional route (both ends included) from `from` to the
  /// closest lattice point satisfying `goal`; nullopt when none is reachable.
  std::optional<std::vector<Point2>> route(Point2 from, const std::function<bool(Point2)> & goal) const;

  /// Lattice points from which `item` can be put in the cart: within reach
  /// and the item is the nearest one.
  bool can_reach(Point2 p, const Item & item) const;

private:
  const StoreMap * map_;
  double step_;
  Point2 origin_;
};

}  // namespace shoptraj::collection

#endif  // SHOPTRAJ_COLLECTION_GRID_HPP_
