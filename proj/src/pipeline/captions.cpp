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

#include "shoptraj/pipeline/captions.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <random>
#include <set>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "shoptraj/errors.hpp"
#include "shoptraj/pipeline/prompts.hpp"

namespace shoptraj::pipeline
{

using nlohmann::json;

namespace
{

// Shown under "Example:" in the Step 1 prompt; two are drawn per batch.
const std::vector<CaptionProfile> kExampleCaptions = {
  {"A retired couple who cook at home every evening. They come with a short list of fresh "
   "vegetables and fish, avoid processed snacks, and prefer mid-priced items over premium ones. "
   "They plan to make a simple grilled fish dinner.",
   5, 1},
  {"A university student living alone on a tight budget. They wander the aisles looking for "
   "discounted ready-to-eat food and instant meals, rarely buy fresh produce, and do not plan a "
   "specific dish.",
   4, 4},
  {"A parent shopping for a family of five who buys in bulk once a week. They follow a long "
   "predetermined list of meat, dairy, bread and fruit, choose affordable family packs, and "
   "want to cook a large pot of curry.",
   12, 2},
  {"A health-conscious professional who prefers organic vegetables, lean chicken and plain "
   "yogurt. They compare nutrition labels carefully before deciding, pay more for quality, and "
   "intend to prepare salads for the week.",
   6, 5},
  {"A young couple hosting friends tonight. They have not decided on a menu, browse the deli, "
   "cheese and wine sections for inspiration, and are happy to spend on high-end items.",
   7, 5},
  {"A busy office worker who stops by on the way home for a few pre-cut and seasoned items. "
   "They know exactly what they need, skip alcohol and sweets, and choose whatever is cheapest.",
   3, 1},
};

std::string trim_lower(std::string_view s)
{
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
    ++b;
  }
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
    --e;
  }
  std::string out(s.substr(b, e - b));
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

const Item * resolve_name(const StoreMap & map, const std::string & name)
{
  if (const Item * exact = map.find_item_by_name(name)) {
    return exact;
  }
  const std::string key = trim_lower(name);
  for (const auto & item : map.items()) {
    if (trim_lower(item.name) == key) {
      return &item;
    }
  }
  return nullptr;
}

struct ResolvedReply
{
  std::vector<std::string> purchase;
  std::vector<std::string> interest;
  std::vector<std::string> dropped;
};

ResolvedReply resolve_reply(const StoreMap & map, const json & reply)
{
  ResolvedReply out;
  std::set<std::string> seen;
  for (const auto & name : reply.at("inclined_to_purchase")) {
    const Item * item = resolve_name(map, name.get<std::string>());
    if (item == nullptr) {
      out.dropped.push_back(name.get<std::string>());
    } else if (seen.insert(item->id).second) {
      out.purchase.push_back(item->id);
    }
  }
  for (const auto & name : reply.at("show_interest")) {
    const Item * item = resolve_name(map, name.get<std::string>());
    if (item == nullptr) {
      out.dropped.push_back(name.get<std::string>());
    } else if (seen.insert(item->id).second) {
      out.interest.push_back(item->id);
    }
  }
  return out;
}

}  // namespace

int ActionPlan::total() const
{
  return std::accumulate(
    allocation.begin(), allocation.end(), 0, [](int acc, const auto & kv) { return acc + kv.second; });
}

int plan_tolerance(int num_items) { return (3 * std::max(num_items, 0) + 9) / 10; }

PlanCheck validate_plan(const ActionPlan & plan, const CaptionProfile & profile)
{
  PlanCheck check;
  check.total = plan.total();
  check.target = profile.num_items_to_buy;
  check.tolerance = plan_tolerance(profile.num_items_to_buy);
  check.ok = std::abs(check.total - check.target) <= check.tolerance;
  if (!check.ok) {
    check.message = "plan allocates " + std::to_string(check.total) + " items but about " +
                    std::to_string(check.target) + " (+/-" + std::to_string(check.tolerance) +
                    ") were requested";
  }
  return check;
}

llm::Schema caption_schema()
{
  using llm::Schema;
  return Schema::object(
    {{"customers",
      Schema::list_of(Schema::object(
        {{"intention", Schema::string()},
         {"num_item_to_buy", Schema::integer()},
         {"purchase_consideration", Schema::integer()}}))}});
}

llm::Schema action_plan_schema() { return llm::Schema::map_of(llm::Schema::integer()); }

llm::Schema item_list_schema()
{
  using llm::Schema;
  return Schema::object(
    {{"inclined_to_purchase", Schema::list_of(Schema::string())},
     {"show_interest", Schema::list_of(Schema::string())}});
}

json to_json(const CaptionProfile & p)
{
  return {
    {"intention", p.caption},
    {"num_item_to_buy", p.num_items_to_buy},
    {"purchase_consideration", p.purchase_consideration}};
}

json to_json(const ActionPlan & p) { return p.allocation; }

json to_json(const ItemLists & l) { return {{"purchase", l.purchase}, {"interest", l.interest}}; }

llm::PromptRequest caption_request(
  int batch_index, int batch_count, int samples, std::uint64_t seed, const StepOptions & options)
{
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(batch_index + 1)));
  std::vector<std::size_t> order(kExampleCaptions.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  json examples = {{"customers", json::array()}};
  for (std::size_t k = 0; k < 2; ++k) {
    examples["customers"].push_back(to_json(kExampleCaptions[order[k]]));
  }
  llm::PromptRequest req;
  req.tag = "step1";
  req.temperature = options.caption_temperature;
  req.max_tokens = options.max_tokens;
  req.system = std::string(prompt_asset("step1_system"));
  req.user = render_template(
    prompt_asset("step1_user"),
    {{"samples", std::to_string(samples)},
     {"examples", examples.dump(2)},
     {"format_instructions", llm::format_instructions(caption_schema())},
     {"batch_index", std::to_string(batch_index + 1)},
     {"batch_count", std::to_string(batch_count)}});
  return req;
}

std::vector<CaptionProfile> generate_captions(
  llm::Gateway & gateway, int n, std::uint64_t seed, const StepOptions & options)
{
  if (n < 1) {
    throw PipelineError("invalid_argument", "generate_captions needs n >= 1");
  }
  const int batch = std::max(1, options.caption_batch_size);
  const int batches = (n + batch - 1) / batch;
  std::vector<CaptionProfile> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int b = 0; b < batches; ++b) {
    const int samples = std::min(batch, n - b * batch);
    const auto req = caption_request(b, batches, samples, seed, options);
    const json reply = llm::complete_structured(gateway, req, caption_schema(), [samples](const json & j) {
      const auto & customers = j.at("customers");
      if (static_cast<int>(customers.size()) < samples) {
        throw PipelineError(
          "too_few_captions", "expected " + std::to_string(samples) + " descriptions, got " +
                                std::to_string(customers.size()));
      }
      for (std::size_t i = 0; i < static_cast<std::size_t>(samples); ++i) {
        const auto & c = customers[i];
        const std::string field = "customers[" + std::to_string(i) + "]";
        if (c.at("intention").get<std::string>().empty()) {
          throw StructuredOutputError("invalid_value", field + ".intention", field + ".intention is empty");
        }
        const long consideration = c.at("purchase_consideration").get<long>();
        if (consideration < 1 || consideration > 5) {
          throw StructuredOutputError(
            "invalid_value", field + ".purchase_consideration",
            field + ".purchase_consideration must be between 1 and 5, got " + std::to_string(consideration));
        }
        if (c.at("num_item_to_buy").get<long>() < 1) {
          throw StructuredOutputError(
            "invalid_value", field + ".num_item_to_buy", field + ".num_item_to_buy must be positive");
        }
      }
    });
    for (int i = 0; i < samples; ++i) {
      const auto & c = reply.at("customers")[static_cast<std::size_t>(i)];
      out.push_back(
        {c.at("intention").get<std::string>(), static_cast<int>(c.at("num_item_to_buy").get<long>()),
         static_cast<int>(c.at("purchase_consideration").get<long>())});
    }
  }
  return out;
}

llm::PromptRequest action_plan_request(
  const CaptionProfile & profile, const std::vector<std::string> & categories, const StepOptions & options)
{
  std::string list;
  for (std::size_t i = 0; i < categories.size(); ++i) {
    list += (i ? ", " : "") + categories[i];
  }
  llm::PromptRequest req;
  req.tag = "step2";
  req.temperature = options.structure_temperature;
  req.max_tokens = options.max_tokens;
  req.system = std::string(prompt_asset("step2_system"));
  req.user = render_template(
    prompt_asset("step2_user"),
    {{"num_items", std::to_string(profile.num_items_to_buy)},
     {"intention", profile.caption},
     {"category_list", list},
     {"format_instructions", llm::format_instructions(action_plan_schema())}});
  return req;
}

ActionPlan generate_action_plan(
  llm::Gateway & gateway, const CaptionProfile & profile, const std::vector<std::string> & categories,
  const StepOptions & options)
{
  const std::set<std::string> known(categories.begin(), categories.end());
  auto to_plan = [](const json & j) {
    ActionPlan plan;
    for (const auto & [k, v] : j.items()) {
      plan.allocation[k] = static_cast<int>(v.get<long>());
    }
    return plan;
  };
  const json reply = llm::complete_structured(
    gateway, action_plan_request(profile, categories, options), action_plan_schema(),
    [&](const json & j) {
      for (const auto & [k, v] : j.items()) {
        if (!known.contains(k)) {
          throw PipelineError("unknown_category", "category '" + k + "' is not sold in this store");
        }
        if (v.get<long>() < 0) {
          throw StructuredOutputError("invalid_value", k, "quantity for '" + k + "' is negative");
        }
      }
      const ActionPlan plan = to_plan(j);
      if (plan.total() <= 0) {
        throw PipelineError("empty_plan", "plan allocates no items");
      }
      const PlanCheck check = validate_plan(plan, profile);
      if (!check.ok) {
        throw PipelineError("plan_tolerance", check.message);
      }
    });
  return to_plan(reply);
}

std::string describe_items(const StoreMap & map, const std::string & category)
{
  std::string out;
  for (const Item * item : map.items_in_category(category)) {
    out += item->name + " (" + item->category + "):";
    bool first = true;
    for (const auto & [k, v] : item->attributes) {
      out += (first ? " " : ", ") + k + "=" + v;
      first = false;
    }
    out += "\n";
  }
  if (!out.empty()) {
    out.pop_back();
  }
  return out;
}

llm::PromptRequest item_list_request(
  const CaptionProfile & profile, const std::string & category, int num_purchase_items,
  const StoreMap & map, const StepOptions & options)
{
  llm::PromptRequest req;
  req.tag = "step3";
  req.temperature = options.structure_temperature;
  req.max_tokens = options.max_tokens;
  req.system = std::string(prompt_asset("step3_system"));
  req.user = render_template(
    prompt_asset("step3_user"),
    {{"category", category},
     {"num_purchase_items", std::to_string(num_purchase_items)},
     {"intention", profile.caption},
     {"purchase_consideration", std::to_string(profile.purchase_consideration)},
     {"item_description", describe_items(map, category)},
     {"format_instructions", llm::format_instructions(item_list_schema())}});
  return req;
}

ItemListsResult generate_item_lists(
  llm::Gateway & gateway, const CaptionProfile & profile, const ActionPlan & plan, const StoreMap & map,
  const StepOptions & options)
{
  ItemListsResult result;
  std::set<std::string> purchased;
  std::set<std::string> interested;
  std::vector<std::string> interest_order;

  // Categories in store layout order so the merged lists are stable.
  for (const auto & category : map.categories()) {
    const auto it = plan.allocation.find(category);
    if (it == plan.allocation.end() || it->second <= 0) {
      continue;
    }
    const int wanted = it->second;
    const json reply = llm::complete_structured(
      gateway, item_list_request(profile, category, wanted, map, options), item_list_schema(),
      [&](const json & j) {
        const ResolvedReply r = resolve_reply(map, j);
        const int got = static_cast<int>(r.purchase.size());
        if (std::abs(got - wanted) > 1) {
          throw PipelineError(
            "purchase_count", "category '" + category + "' expects about " + std::to_string(wanted) +
                                " purchase items but " + std::to_string(got) + " resolved to the catalog");
        }
      });
    const ResolvedReply r = resolve_reply(map, reply);
    for (const auto & name : r.dropped) {
      const std::string w = "dropped unknown item '" + name + "' in category '" + category + "'";
      spdlog::warn("[step3] {}", w);
      result.warnings.push_back(w);
    }
    if (static_cast<int>(r.interest.size()) >= wanted) {
      const std::string w = "interest list for '" + category + "' has " + std::to_string(r.interest.size()) +
                            " items, not fewer than " + std::to_string(wanted);
      spdlog::info("[step3] {}", w);
      result.warnings.push_back(w);
    }
    if (static_cast<int>(r.interest.size()) > 2 * wanted) {
      const std::string w = "interest list for '" + category + "' exceeds the soft ceiling of " +
                            std::to_string(2 * wanted);
      spdlog::warn("[step3] {}", w);
      result.warnings.push_back(w);
    }
    for (const auto & id : r.purchase) {
      if (purchased.insert(id).second) {
        result.lists.purchase.push_back(id);
      }
    }
    for (const auto & id : r.interest) {
      if (interested.insert(id).second) {
        interest_order.push_back(id);
      }
    }
  }
  for (const auto & id : interest_order) {
    if (!purchased.contains(id)) {
      result.lists.interest.push_back(id);
    }
  }
  if (result.lists.purchase.empty()) {
    throw PipelineError("empty_purchase_list", "no purchase items resolved for any category");
  }
  return result;
}

}  // namespace shoptraj::pipeline
