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


#include "shoptraj/planner/ranks.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "shoptraj/errors.hpp"

namespace shoptraj::planner
{

double rank_scale(const StoreMap & map)
{
  std::set<double> ranks;
  for (const auto & c : map.categories()) {
    ranks.insert(map.category_base_ranks().at(c));
  }
  if (ranks.size() < 2) {
    return 1.0;
  }
  return (*ranks.rbegin() - *ranks.begin()) / static_cast<double>(ranks.size() - 1);
}

RankAssignment sample_category_ranks(
  const StoreMap & map, const pipeline::ItemLists & lists, int consideration, const PlannerParams & params,
  std::mt19937_64 & rng)
{
  if (lists.purchase.empty() && lists.interest.empty()) {
    throw PlanningError("empty_lists", "no items to visit");
  }
  const double sigma = params.sigma_for(consideration) * rank_scale(map);
  std::normal_distribution<double> normal(0.0, 1.0);
  RankAssignment out;
  for (const auto & c : map.categories()) {
    const double z = normal(rng);
    out.sampled_rank[c] = map.category_base_ranks().at(c) + sigma * z;
  }

  struct Key
  {
    double rank;
    std::string category;
    double entrance_distance;
    std::string id;
  };
  std::vector<Key> keys;
  std::set<std::string> seen;
  auto add = [&](const std::string & id) {
    if (!seen.insert(id).second) {
      return;
    }
    const Item * item = map.find_item(id);
    if (item == nullptr) {
      throw PlanningError("unknown_item", "item '" + id + "' is not in map " + map.id());
    }
    keys.push_back(
      {out.sampled_rank.at(item->category), item->category, distance(item->position, map.entrance()), id});
  };
  for (const auto & id : lists.purchase) {
    add(id);
  }
  for (const auto & id : lists.interest) {
    add(id);
  }
  std::sort(keys.begin(), keys.end(), [](const Key & a, const Key & b) {
    return std::tie(a.rank, a.category, a.entrance_distance, a.id) <
           std::tie(b.rank, b.category, b.entrance_distance, b.id);
  });
  for (const auto & k : keys) {
    out.visit_order.push_back(k.id);
  }
  return out;
}

}  // namespace shoptraj::planner
