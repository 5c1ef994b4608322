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


#include "shoptraj/planner/generator.hpp"

#include <algorithm>
#include <set>

#include <spdlog/spdlog.h>

#include "shoptraj/errors.hpp"

namespace shoptraj::planner
{

namespace
{

constexpr double kProgressEpsilon = 0.05;
constexpr int kStallSteps = 20;
constexpr int kMaxReplans = 5;

Roadmap seeded_roadmap(const StoreMap & map, const PlannerParams & params, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  return build_roadmap(map, params, rng);
}

}  // namespace

TrajectoryGenerator::TrajectoryGenerator(const StoreMap & map, PlannerParams params, std::uint64_t roadmap_seed)
: map_(&map),
  params_(std::move(params)),
  roadmap_seed_(roadmap_seed),
  roadmap_((params_.validate(), seeded_roadmap(map, params_, roadmap_seed))),
  field_(map, 0.05)
{
  const double r = map.agent_radius();
  const double tol = params_.arrival_tolerance;

  for (const auto & item : map.items()) {
    const Rect & rect = map.shelf_of(item).rect;
    const Point2 face{
      std::clamp(item.position.x, rect.min.x, rect.max.x), std::clamp(item.position.y, rect.min.y, rect.max.y)};
    Point2 normal = item.position - face;
    if (norm(normal) < 1e-9) {
      approach_[item.id] = std::nullopt;
      continue;
    }
    normal = normal * (1.0 / norm(normal));
    const Point2 lateral{-normal.y, normal.x};
    std::optional<Point2> found;
    for (double d_off : {0.0, 0.1, -0.1, 0.2, -0.2}) {
      for (double lat : {0.0, 0.1, -0.1, 0.2, -0.2, 0.3, -0.3}) {
        const Point2 p = snap(face + normal * (params_.approach_offset + d_off) + lateral * lat);
        if (
          map.clearance(p) > r + tol && distance(p, item.position) <= map.reach_distance() &&
          map.nearest_item(p).id == item.id) {
          found = p;
          break;
        }
      }
      if (found) {
        break;
      }
    }
    approach_[item.id] = found;
  }

  // Roomiest point of the cashier, nearest its center on ties.
  const Rect & c = map.cashier();
  double best = -1.0;
  double best_center = 0.0;
  cashier_goal_ = snap(c.center());
  for (double y = c.min.y; y <= c.max.y + 1e-9; y += 0.05) {
    for (double x = c.min.x; x <= c.max.x + 1e-9; x += 0.05) {
      const Point2 p = snap({x, y});
      if (!c.contains(p)) {
        continue;
      }
      const double score = std::min(map.clearance(p), r + 0.5);
      const double dc = distance(p, c.center());
      if (score > best + 1e-12 || (std::abs(score - best) <= 1e-12 && dc < best_center)) {
        best = score;
        best_center = dc;
        cashier_goal_ = p;
      }
    }
  }
}

std::optional<Point2> TrajectoryGenerator::approach_point(const Item & item) const
{
  const auto it = approach_.find(item.id);
  return it == approach_.end() ? std::nullopt : it->second;
}

double TrajectoryGenerator::effective_v_max() const
{
  return std::max(0.0, params_.v_max - 0.002 / params_.dt);
}

std::vector<Point2> TrajectoryGenerator::plan_leg(Point2 from, Point2 to) const
{
  try {
    return plan_global(roadmap_, from, to);
  } catch (const PlanningError & e) {
    if (e.code() != "disconnected") {
      throw;
    }
  }
  std::call_once(dense_once_, [this] {
    PlannerParams denser = params_;
    denser.prm_samples *= 2;
    spdlog::info("[planner] roadmap for map {} disconnected, building {} samples", map_->id(), denser.prm_samples);
    dense_ = std::make_unique<Roadmap>(seeded_roadmap(*map_, denser, roadmap_seed_ + 1));
  });
  return plan_global(*dense_, from, to);
}

GenerationResult TrajectoryGenerator::generate(
  const pipeline::ItemLists & lists, int consideration, std::mt19937_64 & rng,
  const StepObserver & observer) const
{
  const StoreMap & map = *map_;
  const PlannerParams & p = params_;
  GenerationResult out;
  out.ranks = sample_category_ranks(map, lists, consideration, p, rng);
  const std::set<std::string> purchase(lists.purchase.begin(), lists.purchase.end());

  AnnotatedTrajectory & traj = out.trajectory;
  traj.map_id = map.id();
  traj.dt = p.dt;
  traj.provenance = Provenance::synthesized;

  KinematicState state;
  state.position = snap(map.entrance());
  traj.positions.push_back(state.position);
  bool heading_set = false;
  int total_steps = 0;
  const double r = map.agent_radius();
  const double spacing = 0.5 * r;
  const double v_limit = effective_v_max();

  auto push = [&](Point2 pos) {
    traj.positions.push_back(pos);
    if (++total_steps > p.max_steps) {
      throw PlanningError("step_budget", "trajectory exceeded " + std::to_string(p.max_steps) + " steps");
    }
  };

  // Drives to goal. With a target item, arrival means resting near the goal
  // with the target as nearest item; without one, entering the cashier.
  auto drive = [&](Point2 goal, const Item * target) {
    std::vector<Point2> path;
    try {
      path = plan_leg(state.position, goal);
    } catch (const PlanningError & e) {
      spdlog::debug("[planner] leg planning failed: {}", e.what());
      return false;
    }
    if (!heading_set && path.size() > 1) {
      const Point2 d = path[1] - path[0];
      state.heading = std::atan2(d.y, d.x);
      heading_set = true;
    }
    std::size_t idx = path.size() > 1 ? 1 : 0;
    // Local minima: when the tracked sub-goal stops getting closer, plan a
    // fresh global path from where the agent stands.
    std::size_t best_idx = idx;
    double best_d = distance(state.position, path[idx]);
    int idle = 0;
    int replans = 0;
    const Point2 leg_start = path.front();
    for (int step = 0; step < p.max_leg_steps; ++step) {
      const Point2 pos = state.position;
      if (target != nullptr) {
        if (
          distance(pos, goal) <= p.arrival_tolerance && state.v <= p.a_max * p.dt + 1e-12 &&
          map.nearest_item(pos).id == target->id) {
          return true;
        }
      } else if (map.cashier().contains(pos)) {
        return true;
      }
      // Move the sub-goal on once the next one is in comfortable sight, or
      // when the current one is reached and the next is at least visible.
      while (idx + 1 < path.size() &&
             (segment_free(map, pos, path[idx + 1], r + p.prm_clearance_margin, spacing) ||
              (distance(pos, path[idx]) < p.waypoint_radius &&
               segment_free(map, pos, path[idx + 1], r + 0.5 * p.prm_clearance_margin, spacing)))) {
        ++idx;
      }
      const double d_sub = distance(pos, path[idx]);
      if (idx != best_idx || d_sub < best_d - kProgressEpsilon) {
        best_idx = idx;
        best_d = d_sub;
        idle = 0;
      } else if (++idle >= kStallSteps && replans < kMaxReplans) {
        ++replans;
        idle = 0;
        try {
          path = plan_leg(pos, goal);
        } catch (const PlanningError & e) {
          spdlog::debug("[planner] replanning failed: {}", e.what());
          return false;
        }
        idx = path.size() > 1 ? 1 : 0;
        best_idx = idx;
        best_d = distance(pos, path[idx]);
        spdlog::debug("[planner] replanned from ({:.3f}, {:.3f})", pos.x, pos.y);
      }
      DwaOptions opt;
      opt.v_limit = v_limit;
      opt.must_stop = target != nullptr && idx + 1 == path.size();
      opt.stop_slack = 0.5 * p.arrival_tolerance;
      opt.prefer_cruise = !opt.must_stop;
      opt.field = &field_;
      const DwaResult res = plan_local_dwa(map, state, path[idx], p, opt);
      if (observer) {
        observer(state, path[idx], res);
      }
      if (res.emergency_stop) {
        ++traj.emergency_stops;
      }
      state = res.next;
      state.position = snap(state.position);
      push(state.position);
    }
    spdlog::debug(
      "[planner] leg from ({:.3f}, {:.3f}) stalled at ({:.3f}, {:.3f}) short of ({:.3f}, {:.3f})", leg_start.x,
      leg_start.y, state.position.x, state.position.y, goal.x, goal.y);
    return false;
  };

  for (const auto & id : out.ranks.visit_order) {
    const Item & item = *map.find_item(id);
    const bool buy = purchase.contains(id);
    const auto goal = approach_point(item);
    if (!goal || !drive(*goal, &item)) {
      if (buy) {
        throw PlanningError("unreachable_item", "purchase item '" + id + "' could not be reached");
      }
      const std::string w = "skipped unreachable interest item '" + id + "'";
      spdlog::warn("[planner] {}", w);
      out.skipped.push_back(id);
      out.warnings.push_back(w);
      continue;
    }
    const int dwell = buy ? p.dwell_steps : p.interest_dwell_steps();
    for (int k = 0; k < dwell; ++k) {
      push(state.position);
    }
    state.v = 0.0;
    state.omega = 0.0;
    if (buy) {
      traj.purchased.push_back(id);
    }
  }
  if (!drive(cashier_goal_, nullptr)) {
    throw PlanningError("cashier_unreachable", "could not reach the cashier");
  }
  traj.items_in_contact = annotate_contacts(map, traj.positions);
  return out;
}

AnnotatedTrajectory generate_trajectory(
  const StoreMap & map, const pipeline::ItemLists & lists, int consideration, const PlannerParams & params,
  std::mt19937_64 & rng)
{
  const TrajectoryGenerator gen(map, params, rng());
  return gen.generate(lists, consideration, rng).trajectory;
}

}  // namespace shoptraj::planner
