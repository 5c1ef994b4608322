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


#ifndef SHOPTRAJ_PLANNER_COLLISION_HPP_
#define SHOPTRAJ_PLANNER_COLLISION_HPP_

#include <vector>

#include "shoptraj/geometry.hpp"
#include "shoptraj/store_map.hpp"

namespace shoptraj::planner
{

/// True when every point of segment ab is free at `radius`. Samples are at
/// most `max_spacing` apart and each must clear radius + spacing/2; since
/// clearance is 1-Lipschitz this covers the points between samples too.
bool segment_free(const StoreMap & map, Point2 a, Point2 b, double radius, double max_spacing);

/// Clearance sampled on a regular grid. lower_bound() never exceeds the
/// true clearance, so checks against it are conservative.
class ClearanceField
{
public:
  ClearanceField(const StoreMap & map, double cell);

  double lower_bound(Point2 p) const
  {
    const double fx = p.x / cell_;
    const double fy = p.y / cell_;
    if (!(fx >= 0.0 && fy >= 0.0)) {
      return -1.0;
    }
    const auto ix = static_cast<std::size_t>(fx + 0.5);
    const auto iy = static_cast<std::size_t>(fy + 0.5);
    if (ix >= nx_ || iy >= ny_) {
      return -1.0;
    }
    return values_[iy * nx_ + ix] - slack_;
  }

  double cell() const { return cell_; }

private:
  double cell_;
  double slack_;
  std::size_t nx_;
  std::size_t ny_;
  std::vector<double> values_;
};

}  // namespace shoptraj::planner

#endif  // SHOPTRAJ_PLANNER_COLLISION_HPP_
