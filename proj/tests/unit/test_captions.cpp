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


#include <gtest/gtest.h>

#include <deque>
#include <map>

#include <nlohmann/json.hpp>

#include "shoptraj/errors.hpp"
#include "shoptraj/pipeline/captions.hpp"
#include "test_support.hpp"

namespace shoptraj::pipeline
{
namespace
{

using nlohmann::json;

// Replies from a per-tag queue; remembers every request.
class ScriptedBackend final : public llm::Backend
{
public:
  ScriptedBackend(std::map<std::string, std::deque<std::string>> * replies, std::vector<llm::PromptRequest> * log)
  : replies_(replies), log_(log)
  {
  }
  std::string complete(const llm::PromptRequest & req) override
  {
    log_->push_back(req);
    auto & q = (*replies_)[req.tag];
    if (q.empty()) {
      throw GatewayError("missing_fixture", "script exhausted for " + req.tag);
    }
    std::string r = q.front();
    q.pop_front();
    return r;
  }

private:
  std::map<std::string, std::deque<std::string>> * replies_;
  std::vector<llm::PromptRequest> * log_;
};

class CaptionsTest : public ::testing::Test
{
protected:
  llm::Gateway & gateway()
  {
    gw_ = std::make_unique<llm::Gateway>(std::make_unique<ScriptedBackend>(&replies, &log), 1);
    return *gw_;
  }

  std::map<std::string, std::deque<std::string>> replies;
  std::vector<llm::PromptRequest> log;
  const StoreMap & map = testing::seen_map();

private:
  std::unique_ptr<llm::Gateway> gw_;
};

json customer(const std::string & intention, int n, int c)
{
  return {{"intention", intention}, {"num_item_to_buy", n}, {"purchase_consideration", c}};
}

std::string name_of(const StoreMap & m, const std::string & category, std::size_t k)
{
  return m.items_in_category(category).at(k)->name;
}

TEST(PlanTolerance, CeilOfThirtyPercent)
{
  EXPECT_EQ(plan_tolerance(1), 1);
  EXPECT_EQ(plan_tolerance(3), 1);
  EXPECT_EQ(plan_tolerance(4), 2);
  EXPECT_EQ(plan_tolerance(10), 3);
  EXPECT_EQ(plan_tolerance(11), 4);
  EXPECT_EQ(plan_tolerance(0), 0);
  for (int n = 1; n <= 50; ++n) {
    EXPECT_EQ(plan_tolerance(n), static_cast<int>(std::ceil(0.3 * n - 1e-9))) << n;
  }
}

TEST(ValidatePlan, ChecksTotalAgainstTarget)
{
  const CaptionProfile p{"c", 10, 2};
  ActionPlan plan{{{"fruit", 6}, {"dairy", 7}}};
  EXPECT_TRUE(validate_plan(plan, p).ok);
  plan.allocation["meat"] = 1;
  const PlanCheck check = validate_plan(plan, p);
  EXPECT_FALSE(check.ok);
  EXPECT_EQ(check.total, 14);
  EXPECT_EQ(check.tolerance, 3);
  EXPECT_FALSE(check.message.empty());
}

TEST_F(CaptionsTest, CaptionsAreBatchedAndValidated)
{
  json b1 = {{"customers", json::array()}};
  for (int i = 0; i < 3; ++i) {
    b1["customers"].push_back(customer("shopper " + std::to_string(i), i + 1, 1 + i));
  }
  json b2 = {{"customers", json::array({customer("last", 2, 5), customer("extra", 1, 1)})}};
  replies["step1"] = {b1.dump(), b2.dump()};
  StepOptions opts;
  opts.caption_batch_size = 3;
  const auto captions = generate_captions(gateway(), 4, 7, opts);
  ASSERT_EQ(captions.size(), 4u);
  EXPECT_EQ(captions[0], (CaptionProfile{"shopper 0", 1, 1}));
  EXPECT_EQ(captions[3], (CaptionProfile{"last", 2, 5}));
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[0].tag, "step1");
  EXPECT_NE(log[0].user, log[1].user);
  EXPECT_DOUBLE_EQ(log[0].temperature, opts.caption_temperature);
}

TEST_F(CaptionsTest, CaptionPromptIsDeterministic)
{
  const StepOptions opts;
  EXPECT_EQ(caption_request(0, 2, 10, 3, opts).user, caption_request(0, 2, 10, 3, opts).user);
  EXPECT_NE(caption_request(0, 2, 10, 3, opts).user, caption_request(1, 2, 10, 3, opts).user);
}

TEST_F(CaptionsTest, OutOfRangeConsiderationIsRepromptedOnce)
{
  const json bad = {{"customers", json::array({customer("x", 1, 9)})}};
  const json good = {{"customers", json::array({customer("x", 1, 4)})}};
  replies["step1"] = {bad.dump(), good.dump()};
  const auto captions = generate_captions(gateway(), 1, 1);
  EXPECT_EQ(captions[0].purchase_consideration, 4);
  EXPECT_EQ(log.size(), 2u);

  replies["step1"] = {bad.dump(), bad.dump()};
  log.clear();
  try {
    generate_captions(gateway(), 1, 1);
    FAIL();
  } catch (const StructuredOutputError & e) {
    EXPECT_EQ(e.field(), "customers[0].purchase_consideration");
  }
  EXPECT_EQ(log.size(), 2u);
}

TEST_F(CaptionsTest, TooFewCaptions)
{
  const json one = {{"customers", json::array({customer("x", 1, 1)})}};
  replies["step1"] = {one.dump(), one.dump()};
  try {
    generate_captions(gateway(), 2, 1);
    FAIL();
  } catch (const PipelineError & e) {
    EXPECT_EQ(e.code(), "too_few_captions");
  }
  EXPECT_THROW(generate_captions(gateway(), 0, 1), PipelineError);
}

TEST_F(CaptionsTest, ActionPlanWithinTolerance)
{
  const auto cats = map.categories();
  replies["step2"] = {"Plan: {\"" + cats[0] + "\": 2, \"" + cats[1] + "\": 1}"};
  const ActionPlan plan = generate_action_plan(gateway(), {"c", 3, 2}, cats);
  EXPECT_EQ(plan.total(), 3);
  EXPECT_EQ(plan.allocation.at(cats[0]), 2);
  EXPECT_NE(log[0].user.find(cats.back()), std::string::npos);
}

TEST_F(CaptionsTest, ActionPlanErrors)
{
  const auto cats = map.categories();
  const CaptionProfile p{"c", 3, 2};
  auto code_for = [&](std::deque<std::string> script) {
    replies["step2"] = std::move(script);
    try {
      generate_action_plan(gateway(), p, cats);
    } catch (const Error & e) {
      return e.code();
    }
    return std::string("no error");
  };
  EXPECT_EQ(code_for({R"({"caviar": 3})", R"({"caviar": 3})"}), "unknown_category");
  EXPECT_EQ(code_for({"{\"" + cats[0] + "\": 9}", "{\"" + cats[0] + "\": 9}"}), "plan_tolerance");
  EXPECT_EQ(code_for({"{\"" + cats[0] + "\": 0}", "{\"" + cats[0] + "\": 0}"}), "empty_plan");
  EXPECT_EQ(code_for({"{\"" + cats[0] + "\": 9}", "{\"" + cats[0] + "\": 4}"}), "no error");
}

TEST_F(CaptionsTest, ItemListsResolveNamesAndMerge)
{
  const auto cats = map.categories();
  const std::string c0 = cats[0];
  const std::string c1 = cats[1];
  const json r0 = {
    {"inclined_to_purchase", {name_of(map, c0, 0), "  " + name_of(map, c0, 1) + " ", "Unicorn Steak"}},
    {"show_interest", {name_of(map, c0, 2), name_of(map, c0, 0)}}};
  const json r1 = {{"inclined_to_purchase", {name_of(map, c1, 0)}}, {"show_interest", json::array()}};
  replies["step3"] = {r0.dump(), r1.dump()};
  const ActionPlan plan{{{c0, 2}, {c1, 1}}};
  const auto result = generate_item_lists(gateway(), {"c", 3, 3}, plan, map);
  const std::vector<std::string> purchase{
    map.items_in_category(c0)[0]->id, map.items_in_category(c0)[1]->id, map.items_in_category(c1)[0]->id};
  EXPECT_EQ(result.lists.purchase, purchase);
  EXPECT_EQ(result.lists.interest, (std::vector<std::string>{map.items_in_category(c0)[2]->id}));
  ASSERT_FALSE(result.warnings.empty());
  EXPECT_NE(result.warnings[0].find("Unicorn Steak"), std::string::npos);
  EXPECT_EQ(log.size(), 2u);
  EXPECT_NE(log[0].user.find(describe_items(map, c0)), std::string::npos);
}

TEST_F(CaptionsTest, ItemListsPurchaseCountIsEnforced)
{
  const std::string c0 = map.categories()[0];
  const json wrong = {{"inclined_to_purchase", {"Nope"}}, {"show_interest", json::array()}};
  replies["step3"] = {wrong.dump(), wrong.dump()};
  try {
    generate_item_lists(gateway(), {"c", 3, 3}, ActionPlan{{{c0, 3}}}, map);
    FAIL();
  } catch (const PipelineError & e) {
    EXPECT_EQ(e.code(), "purchase_count");
  }
}

TEST(DescribeItems, OneLinePerItem)
{
  const StoreMap & m = testing::seen_map();
  const std::string c0 = m.categories()[0];
  const std::string d = describe_items(m, c0);
  EXPECT_EQ(static_cast<std::size_t>(std::count(d.begin(), d.end(), '\n')) + 1, m.items_in_category(c0).size());
  EXPECT_EQ(d.rfind(m.items_in_category(c0)[0]->name + " (" + c0 + "):", 0), 0u);
  EXPECT_TRUE(describe_items(m, "no-such-category").empty());
}

}  // namespace
}  // namespace shoptraj::pipeline
