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


#ifndef SHOPTRAJ_PLANNER_RANKS_HPP_
#define SHOPTRAJ_PLANNER_RANKS_HPP_

#include <map>
#include <random>
#include <string>
#include <vector>

#include "shoptraj/pipeline/captions.hpp"
#include "shoptraj/planner/params.hpp"
#include "shoptraj/store_map.hpp"

namespace shoptraj::planner
{

struct RankAssignment
{
  std::map<std::string, double> sampled_rank;
  std::vector<std::string> visit_order;  // item ids
};

/// Mean gap between consecutive distinct base ranks of the map; 1 when the
/// map has fewer than two categories.
double rank_scale(const StoreMap & map);

/// Draws one standard normal per map category (in categories() order) and
/// sets rank = base + sigma * z. Drawing for every category, used or not,
/// keeps the random stream independent of the item lists.
RankAssignment sample_category_ranks(
  const StoreMap & map, const pipeline::ItemLists & lists, int consideration, const PlannerParams & params,
  std::mt19937_64 & rng);

}  // namespace shoptraj::planner

#endif  // SHOPTRAJ_PLANNER_RANKS_HPP_
