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


#ifndef SHOPTRAJ_PLANNER_DWA_HPP_
#define SHOPTRAJ_PLANNER_DWA_HPP_

#include "shoptraj/geometry.hpp"
#include "shoptraj/planner/collision.hpp"
#include "shoptraj/planner/params.hpp"
#include "shoptraj/store_map.hpp"

namespace shoptraj::planner
{

struct KinematicState
{
  Point2 position;
  double heading = 0.0;
  double v = 0.0;
  double omega = 0.0;
};

struct VelocityCommand
{
  double v = 0.0;
  double omega = 0.0;
};

struct DynamicWindow
{
  double v_lo = 0.0;
  double v_hi = 0.0;
  double omega_lo = 0.0;
  double omega_hi = 0.0;

  bool contains(const VelocityCommand & c, double eps = 1e-12) const
  {
    return c.v >= v_lo - eps && c.v <= v_hi + eps && c.omega >= omega_lo - eps && c.omega <= omega_hi + eps;
  }
};

struct DwaOptions
{
  // Speed limit actually used; defaults to params.v_max when negative.
  double v_limit = -1.0;
  // The waypoint is a stopping point: only commands after which the agent
  // can still brake to rest within stop_slack of it are admissible, and
  // rollouts hold the command for one step and then brake to rest.
  bool must_stop = false;
  double stop_slack = 0.1;
  // Prefer commands at or above params.cruise_speed_floor when any exist.
  bool prefer_cruise = false;
  // Optional precomputed clearance for faster rollout checks.
  const ClearanceField * field = nullptr;
};

struct DwaResult
{
  VelocityCommand command;
  KinematicState next;
  DynamicWindow window;
  bool emergency_stop = false;
  double score = 0.0;
};

/// Forward velocity limited to [0, v_limit]; angular to [-omega_max, omega_max].
DynamicWindow dynamic_window(const KinematicState & s, const PlannerParams & params, double v_limit);

/// Exact unicycle integration of a constant command over `t` seconds.
KinematicState integrate(const KinematicState & s, const VelocityCommand & c, double t);

/// Distance covered while braking at a_max per step from speed v, counting
/// only the steps after the current one.
double braking_distance(double v, const PlannerParams & params);

/// Whether the rollout plan_local_dwa would score for this command stays
/// free: constant over the horizon, or one step then braking to rest.
bool rollout_free(
  const StoreMap & map, const KinematicState & s, const VelocityCommand & c, const PlannerParams & params,
  bool braking = false, const ClearanceField * field = nullptr);

DwaResult plan_local_dwa(
  const StoreMap & map, const KinematicState & state, Point2 waypoint, const PlannerParams & params,
  const DwaOptions & options = {});

}  // namespace shoptraj::planner

#endif  // SHOPTRAJ_PLANNER_DWA_HPP_
