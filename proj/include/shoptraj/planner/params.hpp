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


#ifndef SHOPTRAJ_PLANNER_PARAMS_HPP_
#define SHOPTRAJ_PLANNER_PARAMS_HPP_

#include <array>
#include <cmath>

#include <nlohmann/json_fwd.hpp>

namespace shoptraj::planner
{

struct PlannerParams
{
  double dt = 0.5;
  double v_max = 1.2;
  double a_max = 0.8;
  double omega_max = M_PI;
  double alpha_max = 2.0 * M_PI;

  double dwa_horizon = 2.0;
  int n_v = 11;
  int n_omega = 21;
  double w_heading = 0.5;
  double w_clearance = 0.3;
  double w_velocity = 0.2;
  double clearance_cap = 1.0;

  int prm_samples = 500;
  double prm_radius = 3.0;
  // Extra clearance kept by roadmap nodes and edges (not by query links),
  // so tracked paths do not graze shelf corners.
  double prm_clearance_margin = 0.25;

  int dwell_steps = 4;
  // Multiplied by the map's rank scale; index 0 is consideration 1.
  std::array<double, 5> rank_sigma = {0.0, 0.5, 1.0, 2.0, 4.0};

  // Distance of the stopping point from the shelf face.
  double approach_offset = 0.7;
  double arrival_tolerance = 0.2;
  double waypoint_radius = 0.5;
  // Below this speed a frame looks like a stop to the translator, so the
  // cruise phase avoids it when it can.
  double cruise_speed_floor = 0.32;
  int max_steps = 6000;
  int max_leg_steps = 800;

  void validate() const;
  int interest_dwell_steps() const { return (dwell_steps + 1) / 2; }
  double sigma_for(int consideration) const;
};

PlannerParams planner_params_from_json(const nlohmann::json & j);
nlohmann::json to_json(const PlannerParams & p);

}  // namespace shoptraj::planner

#endif  // SHOPTRAJ_PLANNER_PARAMS_HPP_
