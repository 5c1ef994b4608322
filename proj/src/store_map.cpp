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

#include "shoptraj/store_map.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "shoptraj/errors.hpp"
#include "shoptraj/io.hpp"

namespace shoptraj
{

using nlohmann::json;

namespace
{

[[noreturn]] void schema_error(const std::string & msg)
{
  throw MapError("schema_violation", "map schema violation: " + msg);
}

[[noreturn]] void geometry_error(const std::string & msg)
{
  throw MapError("geometric_violation", "map geometry violation: " + msg);
}

const json & require(const json & obj, const char * key, const std::string & where)
{
  if (!obj.is_object() || !obj.contains(key)) {
    schema_error(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

double require_number(const json & obj, const char * key, const std::string & where)
{
  const json & v = require(obj, key, where);
  if (!v.is_number()) {
    schema_error(where + ": field '" + key + "' must be a number");
  }
  return v.get<double>();
}

std::string require_string(const json & obj, const char * key, const std::string & where)
{
  const json & v = require(obj, key, where);
  if (!v.is_string()) {
    schema_error(where + ": field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

Point2 parse_point(const json & v, const std::string & where)
{
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    schema_error(where + ": expected [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Rect parse_rect(const json & v, const std::string & where)
{
  if (!v.is_array() || v.size() != 4) {
    schema_error(where + ": expected [xmin, ymin, xmax, ymax]");
  }
  for (const auto & c : v) {
    if (!c.is_number()) {
      schema_error(where + ": rect coordinates must be numbers");
    }
  }
  Rect r{{v[0].get<double>(), v[1].get<double>()}, {v[2].get<double>(), v[3].get<double>()}};
  if (r.width() <= 0.0 || r.height() <= 0.0) {
    schema_error(where + ": rect must have positive width and height");
  }
  return r;
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

json rect_json(const Rect & r) { return json::array({r.min.x, r.min.y, r.max.x, r.max.y}); }

// Labels end up inside the model-input string, so they must not collide with
// its delimiters.
bool has_reserved_chars(std::string_view s)
{
  return s.find('\'') != std::string_view::npos || s.find('\n') != std::string_view::npos ||
         s.find("</s>") != std::string_view::npos;
}

}  // namespace

std::vector<std::string> StoreMap::categories() const
{
  std::set<std::string> seen;
  for (const auto & item : items_) {
    seen.insert(item.category);
  }
  std::vector<std::string> out(seen.begin(), seen.end());
  std::stable_sort(out.begin(), out.end(), [this](const std::string & a, const std::string & b) {
    return base_ranks_.at(a) < base_ranks_.at(b);
  });
  return out;
}

std::vector<const Item *> StoreMap::items_in_category(std::string_view category) const
{
  std::vector<const Item *> out;
  for (const auto & item : items_) {
    if (item.category == category) {
      out.push_back(&item);
    }
  }
  return out;
}

const Item * StoreMap::find_item(std::string_view id) const
{
  for (const auto & item : items_) {
    if (item.id == id) {
      return &item;
    }
  }
  return nullptr;
}

const Item * StoreMap::find_item_by_name(std::string_view name) const
{
  for (const auto & item : items_) {
    if (item.name == name) {
      return &item;
    }
  }
  return nullptr;
}

const Item & StoreMap::nearest_item(Point2 p) const
{
  if (items_.empty()) {
    throw MapError("empty_catalog", "nearest_item on a map without items");
  }
  const Item * best = nullptr;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (const auto & item : items_) {
    const double dx = item.position.x - p.x;
    const double dy = item.position.y - p.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2 || (d2 == best_d2 && item.id < best->id)) {
      best = &item;
      best_d2 = d2;
    }
  }
  return *best;
}

double StoreMap::clearance(Point2 p) const
{
  double c = std::min({p.x, width_ - p.x, p.y, height_ - p.y});
  for (const auto & shelf : shelves_) {
    // Cheap reject before the hypot.
    const double dx = std::max({shelf.rect.min.x - p.x, 0.0, p.x - shelf.rect.max.x});
    if (dx >= c) {
      continue;
    }
    const double dy = std::max({shelf.rect.min.y - p.y, 0.0, p.y - shelf.rect.max.y});
    if (dy >= c) {
      continue;
    }
    c = std::min(c, std::hypot(dx, dy));
  }
  return c;
}

const Shelf & StoreMap::shelf_of(const Item & item) const
{
  const auto idx = static_cast<std::size_t>(&item - items_.data());
  if (idx >= items_.size()) {
    throw MapError("unknown_item", "item '" + item.id + "' does not belong to map " + id_);
  }
  return shelves_[shelf_index_of_item_[idx]];
}

StoreMap load_map(std::string_view document)
{
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error & e) {
    schema_error(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    schema_error("top level must be an object");
  }

  StoreMap m;
  m.id_ = doc.contains("id") ? require_string(doc, "id", "map") : std::string("map");
  m.width_ = require_number(doc, "width", "map");
  m.height_ = require_number(doc, "height", "map");
  if (m.width_ <= 0.0 || m.height_ <= 0.0) {
    schema_error("width and height must be positive");
  }
  m.agent_radius_ = doc.contains("agent_radius") ? require_number(doc, "agent_radius", "map") : 0.25;
  if (m.agent_radius_ < 0.0) {
    schema_error("agent_radius must be non-negative");
  }
  if (doc.contains("reach_distance")) {
    m.reach_distance_ = require_number(doc, "reach_distance", "map");
    if (m.reach_distance_ <= 0.0) {
      schema_error("reach_distance must be positive");
    }
  }
  m.entrance_ = parse_point(require(doc, "entrance", "map"), "entrance");
  m.cashier_ = parse_rect(require(require(doc, "cashier", "map"), "rect", "cashier"), "cashier.rect");

  const json & shelves = require(doc, "shelves", "map");
  if (!shelves.is_array()) {
    schema_error("shelves must be a list");
  }
  for (std::size_t i = 0; i < shelves.size(); ++i) {
    const std::string where = "shelves[" + std::to_string(i) + "]";
    Shelf s;
    s.rect = parse_rect(require(shelves[i], "rect", where), where + ".rect");
    s.category = require_string(shelves[i], "category", where);
    if (s.category.empty() || has_reserved_chars(s.category)) {
      schema_error(where + ": category must be non-empty without quotes, newlines or </s>");
    }
    m.shelves_.push_back(std::move(s));
  }

  const json & ranks = require(doc, "category_base_ranks", "map");
  if (!ranks.is_object()) {
    schema_error("category_base_ranks must be an object");
  }
  for (const auto & [category, rank] : ranks.items()) {
    if (!rank.is_number()) {
      schema_error("category_base_ranks." + category + " must be a number");
    }
    m.base_ranks_[category] = rank.get<double>();
  }

  const json & items = require(doc, "items", "map");
  if (!items.is_array()) {
    schema_error("items must be a list");
  }
  std::set<std::string> ids;
  std::set<std::string> names;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string where = "items[" + std::to_string(i) + "]";
    Item it;
    it.id = require_string(items[i], "id", where);
    it.name = require_string(items[i], "name", where);
    it.category = require_string(items[i], "category", where);
    it.position = parse_point(require(items[i], "position", where), where + ".position");
    if (items[i].contains("attributes")) {
      const json & attrs = items[i].at("attributes");
      if (!attrs.is_object()) {
        schema_error(where + ": attributes must be an object");
      }
      for (const auto & [k, v] : attrs.items()) {
        if (!v.is_string()) {
          schema_error(where + ": attribute '" + k + "' must be a string");
        }
        it.attributes[k] = v.get<std::string>();
      }
    }
    if (it.id.empty() || !ids.insert(it.id).second) {
      schema_error(where + ": id must be non-empty and unique");
    }
    if (it.name.empty() || has_reserved_chars(it.name) || !names.insert(it.name).second) {
      schema_error(where + ": name must be non-empty, unique, without quotes, newlines or </s>");
    }
    if (it.category.empty() || has_reserved_chars(it.category)) {
      schema_error(where + ": category must be non-empty without quotes, newlines or </s>");
    }
    m.items_.push_back(std::move(it));
  }

  // Geometry.
  for (std::size_t i = 0; i < m.shelves_.size(); ++i) {
    const Rect & r = m.shelves_[i].rect;
    if (r.min.x < 0.0 || r.min.y < 0.0 || r.max.x > m.width_ || r.max.y > m.height_) {
      geometry_error("shelf " + std::to_string(i) + " extends beyond the map bounds");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (r.overlaps(m.shelves_[j].rect)) {
        geometry_error("shelves " + std::to_string(j) + " and " + std::to_string(i) + " overlap");
      }
    }
  }
  if (!m.is_free(m.entrance_, m.agent_radius_)) {
    geometry_error("entrance is not in free space (inside a shelf or too close to one)");
  }
  {
    bool cashier_reachable = false;
    const double step = 0.05;
    for (double x = m.cashier_.min.x; x <= m.cashier_.max.x && !cashier_reachable; x += step) {
      for (double y = m.cashier_.min.y; y <= m.cashier_.max.y; y += step) {
        if (m.is_free({x, y}, m.agent_radius_)) {
          cashier_reachable = true;
          break;
        }
      }
    }
    if (!cashier_reachable) {
      geometry_error("cashier region does not intersect free space");
    }
  }
  m.shelf_index_of_item_.reserve(m.items_.size());
  for (const auto & it : m.items_) {
    if (!m.in_bounds(it.position)) {
      geometry_error("item '" + it.id + "' lies outside the map");
    }
    std::size_t hits = 0;
    std::size_t shelf_idx = 0;
    for (std::size_t s = 0; s < m.shelves_.size(); ++s) {
      if (m.shelves_[s].rect.distance_to(it.position) <= m.reach_distance_) {
        ++hits;
        shelf_idx = s;
      }
    }
    if (hits != 1) {
      geometry_error(
        "item '" + it.id + "' must be within reach of exactly one shelf (found " +
        std::to_string(hits) + ")");
    }
    m.shelf_index_of_item_.push_back(shelf_idx);
    if (!m.base_ranks_.contains(it.category)) {
      throw MapError(
        "rank_violation", "category '" + it.category + "' has no entry in category_base_ranks");
    }
  }
  return m;
}

StoreMap load_map_file(const std::filesystem::path & path)
{
  return load_map(read_text_file(path));
}

std::string serialize_map(const StoreMap & map)
{
  json doc = json::object();
  doc["id"] = map.id();
  doc["width"] = map.width();
  doc["height"] = map.height();
  doc["agent_radius"] = map.agent_radius();
  doc["reach_distance"] = map.reach_distance();
  doc["entrance"] = point_json(map.entrance());
  doc["cashier"] = {{"rect", rect_json(map.cashier())}};
  json shelves = json::array();
  for (const auto & s : map.shelves()) {
    shelves.push_back({{"rect", rect_json(s.rect)}, {"category", s.category}});
  }
  doc["shelves"] = std::move(shelves);
  json items = json::array();
  for (const auto & it : map.items()) {
    items.push_back(
      {{"id", it.id},
       {"name", it.name},
       {"category", it.category},
       {"position", point_json(it.position)},
       {"attributes", it.attributes}});
  }
  doc["items"] = std::move(items);
  doc["category_base_ranks"] = map.category_base_ranks();
  return doc.dump(2) + "\n";
}

}  // namespace shoptraj
