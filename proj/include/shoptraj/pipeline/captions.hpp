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

#ifndef SHOPTRAJ_PIPELINE_CAPTIONS_HPP_
#define SHOPTRAJ_PIPELINE_CAPTIONS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "shoptraj/llm/gateway.hpp"
#include "shoptraj/llm/structured.hpp"
#include "shoptraj/store_map.hpp"

namespace shoptraj::pipeline
{

/// A contextual caption with the shopping parameters that come with it.
struct CaptionProfile
{
  std::string caption;
  int num_items_to_buy = 1;
  int purchase_consideration = 1;  // 1 (decided) .. 5 (explores a lot)

  friend bool operator==(const CaptionProfile &, const CaptionProfile &) = default;
};

/// Category -> planned purchase quantity.
struct ActionPlan
{
  std::map<std::string, int> allocation;

  int total() const;
  friend bool operator==(const ActionPlan &, const ActionPlan &) = default;
};

/// Concrete item ids to buy and to look at. Disjoint; every id is in the
/// catalog of the map the lists were generated for.
struct ItemLists
{
  std::vector<std::string> purchase;
  std::vector<std::string> interest;

  friend bool operator==(const ItemLists &, const ItemLists &) = default;
};

struct PlanCheck
{
  bool ok = true;
  int total = 0;
  int target = 0;
  int tolerance = 0;
  std::string message;
};

struct StepOptions
{
  double caption_temperature = 1.0;
  double structure_temperature = 0.2;
  int caption_batch_size = 10;
  int max_tokens = 4096;
};

struct ItemListsResult
{
  ItemLists lists;
  std::vector<std::string> warnings;
};

/// Allowed deviation of a plan total from the requested quantity:
/// ceil(0.3 * num_items).
int plan_tolerance(int num_items);

/// Step 1. Requests captions in batches and validates the shopping
/// parameters of each. `seed` picks the example captions shown per batch.
std::vector<CaptionProfile> generate_captions(
  llm::Gateway & gateway, int n, std::uint64_t seed, const StepOptions & options = {});

/// Step 2. Throws PipelineError (unknown_category, plan_tolerance, empty_plan)
/// when the reply is still invalid after one re-prompt.
ActionPlan generate_action_plan(
  llm::Gateway & gateway, const CaptionProfile & profile,
  const std::vector<std::string> & categories, const StepOptions & options = {});

PlanCheck validate_plan(const ActionPlan & plan, const CaptionProfile & profile);

/// Step 3. One request per category with a positive allocation. Names not in
/// the catalog are dropped with a warning.
ItemListsResult generate_item_lists(
  llm::Gateway & gateway, const CaptionProfile & profile, const ActionPlan & plan,
  const StoreMap & map, const StepOptions & options = {});

/// "name (category): key=value, ..." per item of the category.
std::string describe_items(const StoreMap & map, const std::string & category);

// Builders for the exact prompts, shared with the fixture recorder.
llm::PromptRequest caption_request(int batch_index, int batch_count, int samples, std::uint64_t seed, const StepOptions & options);
llm::PromptRequest action_plan_request(const CaptionProfile & profile, const std::vector<std::string> & categories, const StepOptions & options);
llm::PromptRequest item_list_request(const CaptionProfile & profile, const std::string & category, int num_purchase_items, const StoreMap & map, const StepOptions & options);

llm::Schema caption_schema();
llm::Schema action_plan_schema();
llm::Schema item_list_schema();

nlohmann::json to_json(const CaptionProfile & p);
nlohmann::json to_json(const ActionPlan & p);
nlohmann::json to_json(const ItemLists & l);

}  // namespace shoptraj::pipeline

#endif  // SHOPTRAJ_PIPELINE_CAPTIONS_HPP_
