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


#ifndef SHOPTRAJ_PLANNER_GENERATOR_HPP_
#define SHOPTRAJ_PLANNER_GENERATOR_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "shoptraj/pipeline/captions.hpp"
#include "shoptraj/planner/collision.hpp"
#include "shoptraj/planner/dwa.hpp"
#include "shoptraj/planner/params.hpp"
#include "shoptraj/planner/ranks.hpp"
#include "shoptraj/planner/roadmap.hpp"
#include "shoptraj/planner/trajectory.hpp"
#include "shoptraj/store_map.hpp"

namespace shoptraj::planner
{

struct GenerationResult
{
  AnnotatedTrajectory trajectory;
  RankAssignment ranks;
  std::vector<std::string> skipped;  // unreachable interest items
  std::vector<std::string> warnings;
};

/// Called after every local planning step with the sub-goal that was tracked.
using StepObserver = std::function<void(const KinematicState & before, Point2 subgoal, const DwaResult & result)>;

/**
 * @brief Step 4 driver: visit order, PRM legs, DWA tracking, dwell stops.
 *
 * Holds the per-map roadmap and clearance field. generate() only reads
 * shared state, except for the lazily built denser fallback roadmap, so one
 * generator can serve several worker threads.
 */
class TrajectoryGenerator
{
public:
  TrajectoryGenerator(const StoreMap & map, PlannerParams params, std::uint64_t roadmap_seed);

  /// Throws PlanningError("unreachable_item") when a purchase-list item
  /// cannot be reached and PlanningError("step_budget") when max_steps runs
  /// out.
  GenerationResult generate(
    const pipeline::ItemLists & lists, int consideration, std::mt19937_64 & rng,
    const StepObserver & observer = {}) const;

  const Roadmap & roadmap() const { return roadmap_; }
  const PlannerParams & params() const { return params_; }
  const StoreMap & map() const { return *map_; }

  /// Stopping point in front of an item: on the outward normal of its shelf,
  /// approach_offset from the shelf face. nullopt when no such point is free.
  std::optional<Point2> approach_point(const Item & item) const;
  Point2 cashier_goal() const { return cashier_goal_; }

  /// Speed limit used while driving; leaves room for the 1 mm export rounding.
  double effective_v_max() const;

private:
  std::vector<Point2> plan_leg(Point2 from, Point2 to) const;

  const StoreMap * map_;
  PlannerParams params_;
  std::uint64_t roadmap_seed_;
  Roadmap roadmap_;
  ClearanceField field_;
  Point2 cashier_goal_;
  std::map<std::string, std::optional<Point2>> approach_;

  mutable std::once_flag dense_once_;
  mutable std::unique_ptr<Roadmap> dense_;
};

/// Convenience wrapper that builds a roadmap from `rng` and generates one
/// trajectory with the same stream.
AnnotatedTrajectory generate_trajectory(
  const StoreMap & map, const pipeline::ItemLists & lists, int consideration, const PlannerParams & params,
  std::mt19937_64 & rng);

}  // namespace shoptraj::planner

#endif  // SHOPTRAJ_PLANNER_GENERATOR_HPP_
