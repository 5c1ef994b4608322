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


#include "shoptraj/collection/script.hpp"

#include "shoptraj/errors.hpp"

namespace shoptraj::collection
{

SessionScript script_session(const StoreMap & map, const MoveGrid & grid, const std::vector<std::string> & item_ids)
{
  SessionScript s;
  Point2 pos = grid.snap(map.entrance());
  s.positions.push_back(pos);
  long t = 0;
  auto walk = [&](const std::vector<Point2> & route) {
    for (std::size_t i = 1; i < route.size(); ++i) {
      s.events.push_back({EventKind::move, route[i], {}, ++t});
      s.positions.push_back(route[i]);
    }
    pos = route.back();
  };
  for (const auto & id : item_ids) {
    const Item * item = map.find_item(id);
    if (item == nullptr) {
      throw SessionError("unknown_item", "no item '" + id + "'");
    }
    const auto route = grid.route(pos, [&](Point2 p) { return grid.can_reach(p, *item); });
    if (!route) {
      throw SessionError("unreachable", "no grid cell reaches item '" + id + "'");
    }
    walk(*route);
    s.events.push_back({EventKind::cart_add, {}, id, ++t});
    s.positions.push_back(pos);
    s.cart.push_back(id);
  }
  const auto route = grid.route(pos, [&](Point2 p) { return map.cashier().contains(p); });
  if (!route) {
    throw SessionError("unreachable", "cashier cannot be reached on the grid");
  }
  walk(*route);
  return s;
}

}  // namespace shoptraj::collection
