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


#include "shoptraj/planner/dwa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace shoptraj::planner
{

namespace
{

Point2 arc_point(const KinematicState & s, const VelocityCommand & c, double t)
{
  if (std::abs(c.omega) < 1e-9) {
    return {s.position.x + c.v * t * std::cos(s.heading), s.position.y + c.v * t * std::sin(s.heading)};
  }
  const double r = c.v / c.omega;
  const double th = s.heading + c.omega * t;
  return {
    s.position.x + r * (std::sin(th) - std::sin(s.heading)),
    s.position.y - r * (std::cos(th) - std::cos(s.heading))};
}

double clearance_at(const StoreMap & map, const ClearanceField * field, Point2 p, double need)
{
  if (field != nullptr) {
    const double lb = field->lower_bound(p);
    if (lb > need) {
      return lb;
    }
  }
  return map.clearance(p);
}

struct Segment
{
  double v;
  double omega;
  double t;
};

// Constant command over the horizon, or, when braking, the command for one
// step followed by the hardest deceleration until rest.
std::vector<Segment> rollout_segments(const VelocityCommand & c, const PlannerParams & params, bool braking)
{
  if (!braking) {
    return {{c.v, c.omega, params.dwa_horizon}};
  }
  std::vector<Segment> segs{{c.v, c.omega, params.dt}};
  for (double u = c.v - params.a_max * params.dt; u > 0.0; u -= params.a_max * params.dt) {
    segs.push_back({u, c.omega, params.dt});
  }
  return segs;
}

// The next pose is exported after rounding to 1 mm (< 0.71 mm shift), and
// the step after it has to be able to start; keep it 1 cm clear.
constexpr double kNextPoseMargin = 1e-2;
// Tracing steps shorter than this count as touching.
constexpr double kMinStep = 1e-3;

// Minimum clearance along the rollout, or -inf when it collides.
//
// Walks the arc by sphere tracing: from a point with clearance c every point
// closer than c - r is clear of the disc, and arc length bounds the straight
// distance, so the whole rollout is certified rather than just samples.
double rollout_clearance(
  const StoreMap & map, const KinematicState & start, const std::vector<Segment> & segs, double dt,
  const ClearanceField * field)
{
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double r = map.agent_radius();
  double lowest = kInf;
  KinematicState s = start;
  for (const auto & seg : segs) {
    const VelocityCommand c{seg.v, seg.omega};
    const double speed = std::abs(seg.v);
    const double length = speed * seg.t;
    double travelled = 0.0;
    while (true) {
      const Point2 p = arc_point(s, c, speed > 0.0 ? travelled / speed : 0.0);
      const double cl = clearance_at(map, field, p, r + 0.25);
      if (length == 0.0 ? cl <= r : cl - r < kMinStep) {
        return -kInf;
      }
      lowest = std::min(lowest, cl);
      if (travelled >= length) {
        break;
      }
      travelled = std::min(length, travelled + 0.999 * (cl - r));
    }
    s = integrate(s, c, seg.t);
  }
  if (!segs.empty() && segs.front().v != 0.0) {
    const Point2 next = arc_point(start, {segs.front().v, segs.front().omega}, dt);
    if (map.clearance(next) <= r + kNextPoseMargin) {
      return -kInf;
    }
  }
  return lowest;
}

std::vector<double> grid(double lo, double hi, int n)
{
  if (n <= 1 || hi - lo < 1e-12) {
    return {n <= 1 ? 0.5 * (lo + hi) : lo};
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
  }
  return out;
}

}  // namespace

DynamicWindow dynamic_window(const KinematicState & s, const PlannerParams & params, double v_limit)
{
  DynamicWindow w;
  w.v_hi = std::clamp(s.v + params.a_max * params.dt, 0.0, v_limit);
  w.v_lo = std::min(std::max(0.0, s.v - params.a_max * params.dt), w.v_hi);
  w.omega_hi = std::clamp(s.omega + params.alpha_max * params.dt, -params.omega_max, params.omega_max);
  w.omega_lo =
    std::min(std::clamp(s.omega - params.alpha_max * params.dt, -params.omega_max, params.omega_max), w.omega_hi);
  return w;
}

KinematicState integrate(const KinematicState & s, const VelocityCommand & c, double t)
{
  KinematicState n;
  n.position = arc_point(s, c, t);
  n.heading = normalize_angle(s.heading + c.omega * t);
  n.v = c.v;
  n.omega = c.omega;
  return n;
}

double braking_distance(double v, const PlannerParams & params)
{
  double d = 0.0;
  for (double u = v - params.a_max * params.dt; u > 0.0; u -= params.a_max * params.dt) {
    d += u * params.dt;
  }
  return d;
}

bool rollout_free(
  const StoreMap & map, const KinematicState & s, const VelocityCommand & c, const PlannerParams & params,
  bool braking, const ClearanceField * field)
{
  return std::isfinite(rollout_clearance(map, s, rollout_segments(c, params, braking), params.dt, field));
}

DwaResult plan_local_dwa(
  const StoreMap & map, const KinematicState & state, Point2 waypoint, const PlannerParams & params,
  const DwaOptions & options)
{
  const double v_limit = options.v_limit < 0.0 ? params.v_max : std::min(options.v_limit, params.v_max);
  DwaResult result;
  result.window = dynamic_window(state, params, v_limit);
  const auto vs = grid(result.window.v_lo, result.window.v_hi, params.n_v);
  const auto ws = grid(result.window.omega_lo, result.window.omega_hi, params.n_omega);
  const double d_goal = distance(state.position, waypoint);

  struct Candidate
  {
    VelocityCommand cmd;
    double score;
    bool admissible;
  };
  std::vector<Candidate> free;
  free.reserve(vs.size() * ws.size());
  for (double v : vs) {
    const bool admissible =
      !options.must_stop || v * params.dt + braking_distance(v, params) <= d_goal + options.stop_slack;
    for (double w : ws) {
      const VelocityCommand cmd{v, w};
      const double cl =
        rollout_clearance(map, state, rollout_segments(cmd, params, options.must_stop), params.dt, options.field);
      if (!std::isfinite(cl)) {
        continue;
      }
      // Heading is judged at the next pose. At the horizon end a fast turn
      // can wrap all the way around and look perfectly aligned.
      const KinematicState end = integrate(state, cmd, params.dt);
      const Point2 to_goal = waypoint - end.position;
      double heading = 1.0;
      if (norm(to_goal) > 1e-9) {
        heading = 1.0 - std::abs(normalize_angle(std::atan2(to_goal.y, to_goal.x) - end.heading)) / M_PI;
      }
      // Near a stopping point the goal itself sets the distance to the shelf,
      // so clearance only filters there.
      const double clearance = options.must_stop
        ? 1.0
        : std::min(cl - map.agent_radius(), params.clearance_cap) / params.clearance_cap;
      const double velocity = params.v_max > 0.0 ? v / params.v_max : 0.0;
      const double score =
        params.w_heading * heading + params.w_clearance * clearance + params.w_velocity * velocity;
      free.push_back({cmd, score, admissible});
    }
  }

  if (free.empty()) {
    result.emergency_stop = true;
    result.command = {0.0, 0.0};
    result.next = state;
    result.next.v = 0.0;
    result.next.omega = 0.0;
    return result;
  }

  auto pick = [&](auto && eligible) -> const Candidate * {
    const Candidate * best = nullptr;
    for (const auto & c : free) {
      if (!eligible(c)) {
        continue;
      }
      if (
        best == nullptr || c.score > best->score + 1e-12 ||
        (std::abs(c.score - best->score) <= 1e-12 &&
         (c.cmd.v > best->cmd.v ||
          (c.cmd.v == best->cmd.v && std::abs(c.cmd.omega) < std::abs(best->cmd.omega))))) {
        best = &c;
      }
    }
    return best;
  };

  const Candidate * best = nullptr;
  if (options.prefer_cruise && !options.must_stop) {
    best = pick([&](const Candidate & c) { return c.cmd.v >= params.cruise_speed_floor - 1e-12; });
  }
  if (best == nullptr) {
    best = pick([](const Candidate & c) { return c.admissible; });
  }
  if (best == nullptr) {
    // Cannot stop in time any more: brake as hard as the window allows.
    best = pick([&](const Candidate & c) { return c.cmd.v <= result.window.v_lo + 1e-12; });
  }
  if (best == nullptr) {
    best = pick([](const Candidate &) { return true; });
  }
  result.command = best->cmd;
  result.score = best->score;
  result.next = integrate(state, best->cmd, params.dt);
  return result;
}

}  // namespace shoptraj::planner
