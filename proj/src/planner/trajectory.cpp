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


#include "shoptraj/planner/trajectory.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "shoptraj/errors.hpp"
#include "shoptraj/io.hpp"

namespace shoptraj::planner
{

using nlohmann::json;

std::string_view to_string(Provenance p) { return p == Provenance::human ? "human" : "synthesized"; }

Provenance provenance_from_string(std::string_view s)
{
  if (s == "human") {
    return Provenance::human;
  }
  if (s == "synthesized") {
    return Provenance::synthesized;
  }
  throw Error("parse_error", "unknown provenance '" + std::string(s) + "'");
}

Point2 snap(Point2 p) { return {std::round(p.x * 1000.0) / 1000.0, std::round(p.y * 1000.0) / 1000.0}; }

std::vector<std::string> annotate_contacts(const StoreMap & map, const std::vector<Point2> & positions)
{
  std::vector<std::string> out;
  out.reserve(positions.size());
  for (const auto & p : positions) {
    out.push_back(map.nearest_item(p).id);
  }
  return out;
}

std::string to_json_line(const AnnotatedTrajectory & t)
{
  std::string pos = "[";
  for (std::size_t i = 0; i < t.positions.size(); ++i) {
    // +0.0 folds -0.000 into 0.000.
    pos += fmt::format("{}[{:.3f},{:.3f}]", i ? "," : "", t.positions[i].x + 0.0, t.positions[i].y + 0.0);
  }
  pos += "]";
  std::string out = "{";
  out += "\"caption_id\":" + json(t.caption_id).dump();
  out += ",\"map_id\":" + json(t.map_id).dump();
  out += ",\"provenance\":" + json(std::string(to_string(t.provenance))).dump();
  out += ",\"dt\":" + json(t.dt).dump();
  out += ",\"positions\":" + pos;
  out += ",\"items_in_contact\":" + json(t.items_in_contact).dump();
  out += ",\"purchased\":" + json(t.purchased).dump();
  out += ",\"emergency_stops\":" + std::to_string(t.emergency_stops);
  out += "}";
  return out;
}

AnnotatedTrajectory trajectory_from_json(const json & j)
{
  try {
    AnnotatedTrajectory t;
    t.caption_id = j.at("caption_id").get<std::string>();
    t.map_id = j.at("map_id").get<std::string>();
    t.provenance = provenance_from_string(j.at("provenance").get<std::string>());
    t.dt = j.value("dt", 0.5);
    for (const auto & p : j.at("positions")) {
      t.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    t.items_in_contact = j.at("items_in_contact").get<std::vector<std::string>>();
    t.purchased = j.at("purchased").get<std::vector<std::string>>();
    t.emergency_stops = j.value("emergency_stops", 0);
    return t;
  } catch (const json::exception & e) {
    throw Error("parse_error", std::string("malformed trajectory record: ") + e.what());
  }
}

AnnotatedTrajectory parse_trajectory_line(std::string_view line)
{
  const json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) {
    throw Error("parse_error", "trajectory line is not valid JSON");
  }
  return trajectory_from_json(j);
}

std::vector<AnnotatedTrajectory> read_trajectories(const std::string & path)
{
  std::vector<AnnotatedTrajectory> out;
  for (const auto & line : read_lines(path)) {
    out.push_back(parse_trajectory_line(line));
  }
  return out;
}

std::vector<Violation> check_trajectory(const StoreMap & map, const AnnotatedTrajectory & t, double max_step)
{
  std::vector<Violation> v;
  auto add = [&](std::string code, long index, std::string message) {
    v.push_back({std::move(code), index, std::move(message)});
  };
  if (t.map_id != map.id()) {
    add("map_mismatch", -1, "trajectory is for map '" + t.map_id + "', checked against '" + map.id() + "'");
    return v;
  }
  if (t.positions.empty()) {
    add("empty", -1, "trajectory has no positions");
    return v;
  }
  if (t.positions.size() != t.items_in_contact.size()) {
    add(
      "length_mismatch", -1,
      fmt::format("{} positions but {} items in contact", t.positions.size(), t.items_in_contact.size()));
  }
  if (distance(t.positions.front(), map.entrance()) > 1e-6) {
    add("start_not_entrance", 0, "first position is not the entrance");
  }
  if (!map.cashier().contains(t.positions.back())) {
    add("end_not_cashier", static_cast<long>(t.positions.size() - 1), "last position is outside the cashier");
  }
  if (t.emergency_stops > 0) {
    add("emergency_stop", -1, fmt::format("{} emergency stops", t.emergency_stops));
  }
  for (std::size_t i = 0; i < t.positions.size(); ++i) {
    const Point2 p = t.positions[i];
    const long idx = static_cast<long>(i);
    if (!map.is_free(p, map.agent_radius())) {
      add("collision", idx, fmt::format("position ({:.3f}, {:.3f}) is not free", p.x, p.y));
    }
    if (i > 0) {
      const double step = distance(p, t.positions[i - 1]);
      if (step > max_step + 1e-9) {
        add("kinematic_bound", idx, fmt::format("displacement {:.4f} exceeds {:.4f}", step, max_step));
      }
    }
    if (i < t.items_in_contact.size()) {
      const std::string & nearest = map.nearest_item(p).id;
      if (t.items_in_contact[i] != nearest) {
        add("contact_mismatch", idx, "item in contact '" + t.items_in_contact[i] + "' is not the nearest item '" + nearest + "'");
      }
    }
  }
  const std::set<std::string> contacts(t.items_in_contact.begin(), t.items_in_contact.end());
  std::set<std::string> bought;
  for (const auto & id : t.purchased) {
    if (map.find_item(id) == nullptr) {
      add("unknown_item", -1, "purchased item '" + id + "' is not in the catalog");
    }
    if (!contacts.contains(id)) {
      add("purchase_not_in_contact", -1, "purchased item '" + id + "' never was the item in contact");
    }
    if (!bought.insert(id).second) {
      add("duplicate_purchase", -1, "item '" + id + "' purchased twice");
    }
  }
  return v;
}

}  // namespace shoptraj::planner
