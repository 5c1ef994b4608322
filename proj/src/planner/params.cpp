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


#include "shoptraj/planner/params.hpp"

#include <string>

#include <nlohmann/json.hpp>

#include "shoptraj/errors.hpp"

namespace shoptraj::planner
{

using nlohmann::json;

void PlannerParams::validate() const
{
  auto positive = [](double v, const char * name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError("config_error", std::string("planner.") + name + " must be positive");
    }
  };
  positive(dt, "dt");
  positive(a_max, "a_max");
  positive(omega_max, "omega_max");
  positive(alpha_max, "alpha_max");
  positive(dwa_horizon, "dwa_horizon");
  positive(clearance_cap, "clearance_cap");
  positive(prm_radius, "prm_radius");
  if (prm_clearance_margin < 0.0) {
    throw ConfigError("config_error", "planner.prm_clearance_margin must be >= 0");
  }
  positive(approach_offset, "approach_offset");
  positive(arrival_tolerance, "arrival_tolerance");
  positive(waypoint_radius, "waypoint_radius");
  if (v_max < 0.0) {
    throw ConfigError("config_error", "planner.v_max must be >= 0");
  }
  if (n_v < 1 || n_omega < 1 || prm_samples < 1 || dwell_steps < 1 || max_steps < 1 || max_leg_steps < 1) {
    throw ConfigError("config_error", "planner sample counts and step limits must be >= 1");
  }
  if (w_heading < 0 || w_clearance < 0 || w_velocity < 0 || w_heading + w_clearance + w_velocity <= 0) {
    throw ConfigError("config_error", "planner weights must be >= 0 with a positive sum");
  }
  for (std::size_t i = 0; i < rank_sigma.size(); ++i) {
    if (rank_sigma[i] < 0 || (i > 0 && rank_sigma[i] < rank_sigma[i - 1])) {
      throw ConfigError("config_error", "planner.rank_sigma must be >= 0 and non-decreasing");
    }
  }
}

double PlannerParams::sigma_for(int consideration) const
{
  if (consideration < 1 || consideration > 5) {
    throw PlanningError("invalid_argument", "purchase consideration must be in 1..5");
  }
  return rank_sigma[static_cast<std::size_t>(consideration - 1)];
}

PlannerParams planner_params_from_json(const json & j)
{
  PlannerParams p;
  if (j.is_null()) {
    return p;
  }
  if (!j.is_object()) {
    throw ConfigError("config_error", "planner must be an object");
  }
  try {
    p.dt = j.value("dt", p.dt);
    p.v_max = j.value("v_max", p.v_max);
    p.a_max = j.value("a_max", p.a_max);
    p.omega_max = j.value("omega_max", p.omega_max);
    p.alpha_max = j.value("alpha_max", p.alpha_max);
    p.dwa_horizon = j.value("dwa_horizon", p.dwa_horizon);
    if (j.contains("dwa_samples")) {
      p.n_v = j.at("dwa_samples").at(0).get<int>();
      p.n_omega = j.at("dwa_samples").at(1).get<int>();
    }
    if (j.contains("weights")) {
      p.w_heading = j.at("weights").at(0).get<double>();
      p.w_clearance = j.at("weights").at(1).get<double>();
      p.w_velocity = j.at("weights").at(2).get<double>();
    }
    p.clearance_cap = j.value("clearance_cap", p.clearance_cap);
    p.prm_samples = j.value("prm_samples", p.prm_samples);
    p.prm_radius = j.value("prm_radius", p.prm_radius);
    p.prm_clearance_margin = j.value("prm_clearance_margin", p.prm_clearance_margin);
    p.dwell_steps = j.value("dwell_steps", p.dwell_steps);
    if (j.contains("rank_sigma_per_consideration")) {
      const auto & s = j.at("rank_sigma_per_consideration");
      for (int c = 1; c <= 5; ++c) {
        p.rank_sigma[static_cast<std::size_t>(c - 1)] = s.at(std::to_string(c)).get<double>();
      }
    }
    p.approach_offset = j.value("approach_offset", p.approach_offset);
    p.arrival_tolerance = j.value("arrival_tolerance", p.arrival_tolerance);
    p.waypoint_radius = j.value("waypoint_radius", p.waypoint_radius);
    p.cruise_speed_floor = j.value("cruise_speed_floor", p.cruise_speed_floor);
    p.max_steps = j.value("max_steps", p.max_steps);
    p.max_leg_steps = j.value("max_leg_steps", p.max_leg_steps);
  } catch (const json::exception & e) {
    throw ConfigError("config_error", std::string("planner: ") + e.what());
  }
  p.validate();
  return p;
}

json to_json(const PlannerParams & p)
{
  json sigma = json::object();
  for (int c = 1; c <= 5; ++c) {
    sigma[std::to_string(c)] = p.rank_sigma[static_cast<std::size_t>(c - 1)];
  }
  return {
    {"dt", p.dt},
    {"v_max", p.v_max},
    {"a_max", p.a_max},
    {"omega_max", p.omega_max},
    {"alpha_max", p.alpha_max},
    {"dwa_horizon", p.dwa_horizon},
    {"dwa_samples", {p.n_v, p.n_omega}},
    {"weights", {p.w_heading, p.w_clearance, p.w_velocity}},
    {"clearance_cap", p.clearance_cap},
    {"prm_samples", p.prm_samples},
    {"prm_radius", p.prm_radius},
    {"prm_clearance_margin", p.prm_clearance_margin},
    {"dwell_steps", p.dwell_steps},
    {"rank_sigma_per_consideration", sigma},
    {"approach_offset", p.approach_offset},
    {"arrival_tolerance", p.arrival_tolerance},
    {"waypoint_radius", p.waypoint_radius},
    {"cruise_speed_floor", p.cruise_speed_floor},
    {"max_steps", p.max_steps},
    {"max_leg_steps", p.max_leg_steps}};
}

}  // namespace shoptraj::planner
