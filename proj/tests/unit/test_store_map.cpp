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

#include <nlohmann/json.hpp>

#include "shoptraj/errors.hpp"
#include "shoptraj/store_map.hpp"
#include "test_support.hpp"

namespace shoptraj
{
namespace
{

using nlohmann::json;

json small_map()
{
  return json::parse(R"({
    "id": "small",
    "width": 10.0,
    "height": 6.0,
    "agent_radius": 0.25,
    "entrance": [1.0, 1.0],
    "cashier": {"rect": [8.0, 0.5, 9.5, 1.5]},
    "shelves": [
      {"rect": [3.0, 2.0, 4.0, 5.0], "category": "fruit"},
      {"rect": [6.0, 2.0, 7.0, 5.0], "category": "dairy"}
    ],
    "items": [
      {"id": "a", "name": "Apples", "category": "fruit", "position": [2.7, 3.0],
       "attributes": {"price": "low"}},
      {"id": "b", "name": "Pears", "category": "fruit", "position": [2.7, 4.0]},
      {"id": "m", "name": "Milk", "category": "dairy", "position": [5.7, 3.0]}
    ],
    "category_base_ranks": {"fruit": 1, "dairy": 2}
  })");
}

std::string expect_map_error(const json & doc)
{
  try {
    load_map(doc.dump());
  } catch (const MapError & e) {
    return e.code();
  }
  return "no error";
}

TEST(StoreMap, LoadsValidDocument)
{
  const StoreMap m = load_map(small_map().dump());
  EXPECT_EQ(m.id(), "small");
  EXPECT_DOUBLE_EQ(m.width(), 10.0);
  EXPECT_DOUBLE_EQ(m.reach_distance(), kDefaultReachDistance);
  ASSERT_EQ(m.items().size(), 3u);
  EXPECT_EQ(m.items()[0].attributes.at("price"), "low");
  EXPECT_EQ(m.categories(), (std::vector<std::string>{"fruit", "dairy"}));
  EXPECT_EQ(m.items_in_category("fruit").size(), 2u);
  EXPECT_EQ(m.find_item("m")->name, "Milk");
  EXPECT_EQ(m.find_item_by_name("Pears")->id, "b");
  EXPECT_EQ(m.find_item("zzz"), nullptr);
  EXPECT_EQ(m.shelf_of(*m.find_item("m")).category, "dairy");
}

TEST(StoreMap, ClearanceAndFreeSpace)
{
  const StoreMap m = load_map(small_map().dump());
  EXPECT_NEAR(m.clearance({2.0, 3.0}), 1.0, 1e-12);
  EXPECT_NEAR(m.clearance({0.5, 3.0}), 0.5, 1e-12);
  EXPECT_LE(m.clearance({3.5, 3.0}), 0.0);
  EXPECT_LE(m.clearance({-1.0, 3.0}), 0.0);
  EXPECT_TRUE(m.is_free({2.0, 3.0}, 0.25));
  EXPECT_FALSE(m.is_free({2.8, 3.0}, 0.25));
}

TEST(StoreMap, NearestItemBreaksTiesById)
{
  json doc = small_map();
  doc["items"][1]["position"] = {2.7, 2.0};
  const StoreMap m = load_map(doc.dump());
  // Equidistant from a (2.7, 3.0) and b (2.7, 2.0).
  EXPECT_EQ(m.nearest_item({2.7, 2.5}).id, "a");
  EXPECT_EQ(m.nearest_item({5.5, 3.0}).id, "m");
}

TEST(StoreMap, SerializeRoundTrip)
{
  const StoreMap m = load_map(small_map().dump());
  EXPECT_EQ(load_map(serialize_map(m)), m);
  const StoreMap & seen = testing::seen_map();
  EXPECT_EQ(load_map(serialize_map(seen)), seen);
}

TEST(StoreMap, ShippedMapsAreValid)
{
  for (const StoreMap * m : {&testing::seen_map(), &testing::unseen_map()}) {
    EXPECT_FALSE(m->items().empty());
    for (const auto & it : m->items()) {
      EXPECT_LE(m->shelf_of(it).rect.distance_to(it.position), m->reach_distance());
    }
  }
}

TEST(StoreMap, SchemaViolations)
{
  EXPECT_EQ(expect_map_error(json::array()), "schema_violation");
  json doc = small_map();
  doc.erase("width");
  EXPECT_EQ(expect_map_error(doc), "schema_violation");
  doc = small_map();
  doc["items"][1]["id"] = "a";
  EXPECT_EQ(expect_map_error(doc), "schema_violation");
  doc = small_map();
  doc["items"][1]["name"] = "Apples";
  EXPECT_EQ(expect_map_error(doc), "schema_violation");
  doc = small_map();
  doc["items"][0]["name"] = "Baker's Bread";
  EXPECT_EQ(expect_map_error(doc), "schema_violation");
  doc = small_map();
  doc["items"][0]["attributes"]["price"] = 3;
  EXPECT_EQ(expect_map_error(doc), "schema_violation");
  try {
    load_map("{not json");
    FAIL();
  } catch (const MapError & e) {
    EXPECT_EQ(e.code(), "schema_violation");
  }
}

TEST(StoreMap, GeometricViolations)
{
  json doc = small_map();
  doc["shelves"][1]["rect"] = {3.5, 2.0, 4.5, 5.0};
  EXPECT_EQ(expect_map_error(doc), "geometric_violation");
  doc = small_map();
  doc["shelves"][1]["rect"] = {9.5, 2.0, 10.5, 5.0};
  EXPECT_EQ(expect_map_error(doc), "geometric_violation");
  doc = small_map();
  doc["entrance"] = {3.5, 3.0};
  EXPECT_EQ(expect_map_error(doc), "geometric_violation");
  doc = small_map();
  doc["items"][0]["position"] = {1.0, 1.0};
  EXPECT_EQ(expect_map_error(doc), "geometric_violation");
  doc = small_map();
  doc["items"][0]["position"] = {12.0, 1.0};
  EXPECT_EQ(expect_map_error(doc), "geometric_violation");
  doc = small_map();
  // Within reach of both shelves.
  doc["shelves"][1]["rect"] = {4.5, 2.0, 5.5, 5.0};
  doc["items"][0]["position"] = {4.25, 3.0};
  doc["items"][2]["position"] = {5.7, 3.0};
  EXPECT_EQ(expect_map_error(doc), "geometric_violation");
}

TEST(StoreMap, RankViolation)
{
  json doc = small_map();
  doc["category_base_ranks"].erase("dairy");
  EXPECT_EQ(expect_map_error(doc), "rank_violation");
}

TEST(StoreMap, EmptyCatalog)
{
  json doc = small_map();
  doc["items"] = json::array();
  const StoreMap m = load_map(doc.dump());
  try {
    m.nearest_item({1.0, 1.0});
    FAIL();
  } catch (const MapError & e) {
    EXPECT_EQ(e.code(), "empty_catalog");
  }
}

}  // namespace
}  // namespace shoptraj
