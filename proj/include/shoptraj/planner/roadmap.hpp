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


#ifndef SHOPTRAJ_PLANNER_ROADMAP_HPP_
#define SHOPTRAJ_PLANNER_ROADMAP_HPP_

#include <random>
#include <vector>

#include "shoptraj/geometry.hpp"
#include "shoptraj/planner/params.hpp"
#include "shoptraj/store_map.hpp"

namespace shoptraj::planner
{

struct RoadmapEdge
{
  std::size_t a;
  std::size_t b;
  double length;
};

/**
 * @brief Probabilistic roadmap over the free space of one map.
 *
 * Nodes are uniform free-space samples; edges join node pairs closer than
 * the connection radius whose straight segment is collision-free. Query
 * points are attached temporarily by plan_global() and never stored, so a
 * roadmap can be shared between threads once built.
 */
class Roadmap
{
public:
  const StoreMap & map() const { return *map_; }
  const std::vector<Point2> & nodes() const { return nodes_; }
  const std::vector<RoadmapEdge> & edges() const { return edges_; }
  const std::vector<std::vector<std::size_t>> & adjacency() const { return adjacency_; }
  double connection_radius() const { return radius_; }
  double agent_radius() const { return agent_radius_; }
  /// Nodes and edges are free at agent_radius + clearance_margin.
  double clearance_margin() const { return margin_; }
  /// Interpolation spacing used for every segment check.
  double check_spacing() const { return 0.5 * agent_radius_; }

private:
  friend Roadmap build_roadmap(const StoreMap &, const PlannerParams &, std::mt19937_64 &);

  const StoreMap * map_ = nullptr;
  std::vector<Point2> nodes_;
  std::vector<RoadmapEdge> edges_;
  // Edge indices per node.
  std::vector<std::vector<std::size_t>> adjacency_;
  double radius_ = 0.0;
  double agent_radius_ = 0.0;
  double margin_ = 0.0;
};

/// Throws PlanningError("sampling_starvation") when free samples cannot be
/// found within 1000 * prm_samples draws. The map must outlive the roadmap.
Roadmap build_roadmap(const StoreMap & map, const PlannerParams & params, std::mt19937_64 & rng);

/// Shortest path from `from` to `to` through the roadmap, shortcut where a
/// straight segment keeps the roadmap's clearance margin. Returns [from]
/// when the points coincide and [from, to] when they see each other. Throws PlanningError("not_free") or
/// PlanningError("disconnected").
std::vector<Point2> plan_global(const Roadmap & roadmap, Point2 from, Point2 to);

double path_length(const std::vector<Point2> & path);

}  // namespace shoptraj::planner

#endif  // SHOPTRAJ_PLANNER_ROADMAP_HPP_
