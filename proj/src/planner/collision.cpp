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


#include "shoptraj/planner/collision.hpp"

#include <cmath>

namespace shoptraj::planner
{

bool segment_free(const StoreMap & map, Point2 a, Point2 b, double radius, double max_spacing)
{
  const double len = distance(a, b);
  const int n = static_cast<int>(std::ceil(len / max_spacing));
  if (n == 0) {
    return map.clearance(a) > radius;
  }
  const double need = radius + 0.5 * len / n;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    if (map.clearance(a + (b - a) * t) <= need) {
      return false;
    }
  }
  return true;
}

ClearanceField::ClearanceField(const StoreMap & map, double cell)
: cell_(cell), slack_(cell * std::sqrt(0.5) + 1e-12)
{
  nx_ = static_cast<std::size_t>(std::floor(map.width() / cell_)) + 1;
  ny_ = static_cast<std::size_t>(std::floor(map.height() / cell_)) + 1;
  values_.resize(nx_ * ny_);
  for (std::size_t iy = 0; iy < ny_; ++iy) {
    for (std::size_t ix = 0; ix < nx_; ++ix) {
      values_[iy * nx_ + ix] = map.clearance({ix * cell_, iy * cell_});
    }
  }
}

}  // namespace shoptraj::planner
