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


#ifndef SHOPTRAJ_COLLECTION_SCRIPT_HPP_
#define SHOPTRAJ_COLLECTION_SCRIPT_HPP_

#include <string>
#include <vector>

#include "shoptraj/collection/grid.hpp"
#include "shoptraj/collection/session_store.hpp"

namespace shoptraj::collection
{

/// Keypress-level events of a participant who walks to each item in order,
/// puts it in the cart and walks to the cashier. `positions` is what the
/// client shows after each event, entrance first.
struct SessionScript
{
  std::vector<SessionEvent> events;
  std::vector<Point2> positions;
  std::vector<std::string> cart;
};

/// Throws SessionError("unreachable") when an item or the cashier cannot
/// be reached on the grid.
SessionScript script_session(const StoreMap & map, const MoveGrid & grid, const std::vector<std::string> & item_ids);

}  // namespace shoptraj::collection

#endif  // SHOPTRAJ_COLLECTION_SCRIPT_HPP_
