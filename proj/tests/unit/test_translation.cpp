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

#include <random>

#include <nlohmann/json.hpp>

#include "shoptraj/errors.hpp"
#include "shoptraj/translation/translation.hpp"
#include "test_support.hpp"

namespace shoptraj::translation
{
namespace
{

const StoreMap & seen() { return testing::seen_map(); }

TEST(Render, ExampleString)
{
  EXPECT_EQ(
    render_model_input({"fruit", "vegetable"}, {"Carrots", "Beef"}),
    "Trajectory is fruit</s>vegetable</s>\n Customer purchase item list is ['Carrots', 'Beef']\n Output:");
  EXPECT_EQ(render_model_input({}, {}), "Trajectory is \n Customer purchase item list is []\n Output:");
}

TEST(Render, ParseIsTheInverse)
{
  std::mt19937_64 rng(17);
  const std::vector<std::string> words{"fruit", "fish", "ice cream", "Dr. Pepper", "a,b", "x]y", "tea & milk"};
  std::uniform_int_distribution<int> len(0, 6);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  for (int k = 0; k < 100; ++k) {
    ModelInput in;
    for (int i = len(rng); i > 0; --i) {
      in.tokens.push_back(words[pick(rng)]);
    }
    for (int i = len(rng); i > 0; --i) {
      in.purchase_names.push_back(words[pick(rng)]);
    }
    EXPECT_EQ(parse_model_input(render_model_input(in.tokens, in.purchase_names)), in);
  }
  EXPECT_THROW(parse_model_input("Trajectory is fruit"), PipelineError);
  EXPECT_THROW(parse_model_input(""), PipelineError);
}

TEST(Stops, ZeroDisplacementIsOneRun)
{
  const std::vector<Point2> x{{2.0, 2.0}, {2.0, 2.0}, {2.0, 2.0}};
  const StopSequence s = detect_stops(seen(), x);
  EXPECT_EQ(s.indices, (std::vector<std::size_t>{1, 2}));
  ASSERT_EQ(s.tokens.size(), 1u);
  EXPECT_EQ(s.tokens[0], seen().nearest_item({2.0, 2.0}).category);
}

TEST(Stops, FastMovementHasNoStops)
{
  std::vector<Point2> x;
  for (int i = 0; i < 20; ++i) {
    x.push_back({1.0 + 0.3 * i, 1.0});
  }
  EXPECT_TRUE(detect_stops(seen(), x).tokens.empty());
}

TEST(Stops, HandComputedFixture)
{
  // Displacements: .5, .1, .05, ~.602, .14, .16, 0, 0
  // Stops (< .15): t = 2, 3, 5, 7, 8.
  const std::vector<Point2> x{
    {1.0, 1.0}, {1.5, 1.0}, {1.6, 1.0}, {1.6, 1.05}, {2.2, 1.0}, {2.2, 1.14}, {2.2, 1.30}, {2.2, 1.30}, {2.2, 1.30}};
  const std::vector<std::string> contacts{
    "s-fru02", "s-fru02", "s-fru01", "s-fru01", "s-fru03", "s-fis01", "s-fis01", "s-fis01", "s-fru04"};
  const StopSequence s = detect_stops(seen(), x, contacts);
  EXPECT_EQ(s.indices, (std::vector<std::size_t>{2, 3, 5, 7, 8}));
  // {2,3} at Apples; {5} and {7} are not adjacent; 8 changes item.
  EXPECT_EQ(s.tokens, (std::vector<std::string>{"fruit", "fish", "fish", "fruit"}));
  EXPECT_EQ(s.run_items, (std::vector<std::string>{"s-fru01", "s-fis01", "s-fis01", "s-fru04"}));
  // A larger threshold also catches t = 6 and joins 5..7.
  EXPECT_EQ(detect_stops(seen(), x, contacts, 0.2).tokens, (std::vector<std::string>{"fruit", "fish", "fruit"}));
}

TEST(Stops, Errors)
{
  const std::vector<Point2> x{{1.0, 1.0}, {1.0, 1.0}};
  EXPECT_THROW(detect_stops(seen(), x, {"s-fru01"}), PipelineError);
  EXPECT_THROW(detect_stops(seen(), x, {"s-fru01", "ghost"}), PipelineError);
  EXPECT_THROW(detect_stops(seen(), x, 0.0), PipelineError);
}

TEST(Lineage, Labels)
{
  EXPECT_EQ(lineage_original(), "original");
  EXPECT_EQ(lineage_paraphrase(3), "paraphrase:3");
  EXPECT_TRUE(is_original("original"));
  EXPECT_FALSE(is_original(lineage_paraphrase(1)));
  EXPECT_EQ(split_from_string(to_string(Split::val)), Split::val);
}

TEST(Record, BuildAndRoundTrip)
{
  planner::AnnotatedTrajectory t;
  t.caption_id = "c-7";
  t.map_id = seen().id();
  t.positions = {{1.0, 1.0}, {1.5, 1.0}, {1.6, 1.0}};
  t.items_in_contact = {"s-fru02", "s-fru02", "s-fis01"};
  t.purchased = {"s-fis01", "s-fru01"};
  const DatasetRecord r = build_record(t, "A quick trip for fish.", seen());
  EXPECT_EQ(r.sample_id, "c-7");
  EXPECT_EQ(r.lineage, "original");
  EXPECT_EQ(
    r.input_text,
    "Trajectory is fish</s>\n Customer purchase item list is ['Salmon Fillet', 'Apples']\n Output:");

  testing::TempDir dir;
  DatasetRecord r2 = r;
  r2.split = Split::val;
  r2.lineage = lineage_paraphrase(2);
  write_dataset(dir / "d.jsonl", {r, r2});
  EXPECT_EQ(read_dataset(dir / "d.jsonl"), (std::vector<DatasetRecord>{r, r2}));
  EXPECT_EQ(record_from_json(to_json(r2)), r2);

  EXPECT_THROW(build_record(t, "", seen()), PipelineError);
  t.purchased = {"ghost"};
  EXPECT_THROW(build_record(t, "caption", seen()), PipelineError);
}

}  // namespace
}  // namespace shoptraj::translation
