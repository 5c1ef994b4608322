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

#ifndef SHOPTRAJ_STORE_MAP_HPP_
#define SHOPTRAJ_STORE_MAP_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "shoptraj/geometry.hpp"

namespace shoptraj
{

struct Item
{
  std::string id;
  std::string name;
  std::string category;
  Point2 position;
  std::map<std::string, std::string> attributes;

  friend bool operator==(const Item &, const Item &) = default;
};

struct Shelf
{
  Rect rect;
  std::string category;

  friend bool operator==(const Shelf & a, const Shelf & b)
  {
    return a.rect.min == b.rect.min && a.rect.max == b.rect.max && a.category == b.category;
  }
};

inline constexpr double kDefaultReachDistance = 0.6;

/**
 * @brief Immutable 2D store model: shelves, item catalog, entrance, cashier.
 *
 * Coordinates are continuous meters with the origin at the bottom-left
 * corner. Walls are the map bounds. Instances are only produced by
 * load_map(), which enforces every geometric and catalog invariant, so a
 * StoreMap can be shared read-only across threads.
 */
class StoreMap
{
public:
  const std::string & id() const { return id_; }
  double width() const { return width_; }
  double height() const { return height_; }
  double agent_radius() const { return agent_radius_; }
  double reach_distance() const { return reach_distance_; }
  Point2 entrance() const { return entrance_; }
  const Rect & cashier() const { return cashier_; }
  const std::vector<Shelf> & shelves() const { return shelves_; }
  const std::vector<Item> & items() const { return items_; }
  const std::map<std::string, double> & category_base_ranks() const { return base_ranks_; }

  /// Categories that have at least one item, ordered by base rank then name.
  std::vector<std::string> categories() const;
  std::vector<const Item *> items_in_category(std::string_view category) const;

  const Item * find_item(std::string_view id) const;
  const Item * find_item_by_name(std::string_view name) const;

  /// Closest item to p; ties go to the lexicographically smallest id.
  /// Throws MapError("empty_catalog") when the map has no items.
  const Item & nearest_item(Point2 p) const;

  /// Distance from p to the closest obstacle (shelf or map boundary).
  /// Non-positive when p is inside a shelf or outside the map.
  double clearance(Point2 p) const;

  /// True iff the closed disc of `radius` at p touches no shelf and stays
  /// strictly inside the map bounds.
  bool is_free(Point2 p, double radius) const { return clearance(p) > radius; }

  bool in_bounds(Point2 p) const
  {
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= width_ && p.y <= height_;
  }

  /// The unique shelf within reach of the item.
  const Shelf & shelf_of(const Item & item) const;

  friend bool operator==(const StoreMap &, const StoreMap &) = default;

private:
  friend StoreMap load_map(std::string_view document);

  std::string id_;
  double width_ = 0.0;
  double height_ = 0.0;
  double agent_radius_ = 0.0;
  double reach_distance_ = kDefaultReachDistance;
  Point2 entrance_;
  Rect cashier_;
  std::vector<Shelf> shelves_;
  std::vector<Item> items_;
  std::map<std::string, double> base_ranks_;
  std::vector<std::size_t> shelf_index_of_item_;
};

/// Parses and validates a map document (JSON, see docs/map_format.md).
/// Throws MapError with code schema_violation, geometric_violation or
/// rank_violation.
StoreMap load_map(std::string_view document);
StoreMap load_map_file(const std::filesystem::path & path);

/// Inverse of load_map: load_map(serialize_map(m)) == m.
std::string serialize_map(const StoreMap & map);

}  // namespace shoptraj

#endif  // SHOPTRAJ_STORE_MAP_HPP_
