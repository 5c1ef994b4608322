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


#ifndef SHOPTRAJ_PLANNER_TRAJECTORY_HPP_
#define SHOPTRAJ_PLANNER_TRAJECTORY_HPP_

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "shoptraj/geometry.hpp"
#include "shoptraj/store_map.hpp"

namespace shoptraj::planner
{

enum class Provenance { synthesized, human };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

/// (X, I, P) plus where it came from. positions[t] is the location at time
/// t * dt; items_in_contact[t] is the nearest catalog item at that time.
struct AnnotatedTrajectory
{
  std::string caption_id;
  std::string map_id;
  Provenance provenance = Provenance::synthesized;
  double dt = 0.5;
  std::vector<Point2> positions;
  std::vector<std::string> items_in_contact;
  std::vector<std::string> purchased;
  int emergency_stops = 0;
};

/// Rounds both coordinates to the 1 mm export grid.
Point2 snap(Point2 p);

std::vector<std::string> annotate_contacts(const StoreMap & map, const std::vector<Point2> & positions);

/// One JSON object on one line; positions with exactly three decimals.
std::string to_json_line(const AnnotatedTrajectory & t);
AnnotatedTrajectory trajectory_from_json(const nlohmann::json & j);
AnnotatedTrajectory parse_trajectory_line(std::string_view line);

std::vector<AnnotatedTrajectory> read_trajectories(const std::string & path);

struct Violation
{
  std::string code;
  long index = -1;  // timestep, or -1 when not tied to one
  std::string message;
};

/// The shared invariant suite. `max_step` bounds ||x_t - x_{t-1}||.
std::vector<Violation> check_trajectory(
  const StoreMap & map, const AnnotatedTrajectory & t, double max_step);

}  // namespace shoptraj::planner

#endif  // SHOPTRAJ_PLANNER_TRAJECTORY_HPP_
