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


#include "shoptraj/planner/roadmap.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>

#include "shoptraj/errors.hpp"
#include "shoptraj/planner/collision.hpp"

namespace shoptraj::planner
{

Roadmap build_roadmap(const StoreMap & map, const PlannerParams & params, std::mt19937_64 & rng)
{
  if (params.prm_samples < 1) {
    throw PlanningError("invalid_argument", "prm_samples must be >= 1");
  }
  Roadmap rm;
  rm.map_ = &map;
  rm.radius_ = params.prm_radius;
  rm.agent_radius_ = map.agent_radius();
  rm.margin_ = params.prm_clearance_margin;
  const double spacing = rm.check_spacing();
  const double inflated = rm.agent_radius_ + rm.margin_;
  // A node is the first sample of every edge through it.
  const double node_clearance = inflated + 0.5 * spacing;

  std::uniform_real_distribution<double> ux(0.0, map.width());
  std::uniform_real_distribution<double> uy(0.0, map.height());
  const long cap = 1000L * params.prm_samples;
  long draws = 0;
  while (static_cast<int>(rm.nodes_.size()) < params.prm_samples) {
    if (++draws > cap) {
      throw PlanningError(
        "sampling_starvation", "found only " + std::to_string(rm.nodes_.size()) + " free samples in " +
                                 std::to_string(cap) + " draws");
    }
    const double x = ux(rng);
    const double y = uy(rng);
    if (map.clearance({x, y}) > node_clearance) {
      rm.nodes_.push_back({x, y});
    }
  }

  rm.adjacency_.resize(rm.nodes_.size());
  for (std::size_t i = 0; i < rm.nodes_.size(); ++i) {
    for (std::size_t j = i + 1; j < rm.nodes_.size(); ++j) {
      const double d = distance(rm.nodes_[i], rm.nodes_[j]);
      if (d > rm.radius_ || !segment_free(map, rm.nodes_[i], rm.nodes_[j], inflated, spacing)) {
        continue;
      }
      rm.adjacency_[i].push_back(rm.edges_.size());
      rm.adjacency_[j].push_back(rm.edges_.size());
      rm.edges_.push_back({i, j, d});
    }
  }
  return rm;
}

double path_length(const std::vector<Point2> & path)
{
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    len += distance(path[i - 1], path[i]);
  }
  return len;
}

std::vector<Point2> plan_global(const Roadmap & roadmap, Point2 from, Point2 to)
{
  const StoreMap & map = roadmap.map();
  const double r = roadmap.agent_radius();
  const double spacing = roadmap.check_spacing();
  if (!map.is_free(from, r) || !map.is_free(to, r)) {
    throw PlanningError("not_free", "global planning endpoint is not in free space");
  }
  if (distance(from, to) < 1e-12) {
    return {from};
  }
  // Query links start next to obstacles more often than roadmap edges do;
  // a finer spacing keeps the sample margin below the start's clearance.
  const double q_spacing =
    std::clamp(1.9 * (std::min(map.clearance(from), map.clearance(to)) - r), 0.005, spacing);
  if (segment_free(map, from, to, r, q_spacing)) {
    return {from, to};
  }

  // Node ids: roadmap nodes, then start (n) and goal (n + 1).
  const auto & nodes = roadmap.nodes();
  const std::size_t n = nodes.size();
  const std::size_t start = n;
  const std::size_t goal = n + 1;
  std::vector<std::pair<std::size_t, double>> start_links;
  std::vector<double> goal_link(n, -1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double ds = distance(from, nodes[i]);
    if (ds <= roadmap.connection_radius() && segment_free(map, from, nodes[i], r, q_spacing)) {
      start_links.emplace_back(i, ds);
    }
    const double dg = distance(to, nodes[i]);
    if (dg <= roadmap.connection_radius() && segment_free(map, nodes[i], to, r, q_spacing)) {
      goal_link[i] = dg;
    }
  }

  std::vector<double> dist(n + 2, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> prev(n + 2, std::numeric_limits<std::size_t>::max());
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[start] = 0.0;
  open.emplace(0.0, start);
  auto relax = [&](std::size_t u, std::size_t v, double w) {
    if (dist[u] + w < dist[v]) {
      dist[v] = dist[u] + w;
      prev[v] = u;
      open.emplace(dist[v], v);
    }
  };
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (d > dist[u]) {
      continue;
    }
    if (u == goal) {
      break;
    }
    if (u == start) {
      for (const auto & [v, w] : start_links) {
        relax(u, v, w);
      }
      continue;
    }
    for (std::size_t e : roadmap.adjacency()[u]) {
      const auto & edge = roadmap.edges()[e];
      relax(u, edge.a == u ? edge.b : edge.a, edge.length);
    }
    if (goal_link[u] >= 0.0) {
      relax(u, goal, goal_link[u]);
    }
  }
  if (!std::isfinite(dist[goal])) {
    throw PlanningError("disconnected", "no roadmap path between the query points");
  }

  std::vector<Point2> raw;
  for (std::size_t v = goal; v != start; v = prev[v]) {
    raw.push_back(v == goal ? to : nodes[v]);
  }
  raw.push_back(from);
  std::reverse(raw.begin(), raw.end());

  // Greedy shortcutting: jump to the farthest waypoint in sight.
  const double inflated = r + roadmap.clearance_margin();
  std::vector<Point2> path{raw.front()};
  std::size_t i = 0;
  while (i + 1 < raw.size()) {
    std::size_t j = raw.size() - 1;
    while (j > i + 1 && !segment_free(map, raw[i], raw[j], inflated, spacing)) {
      --j;
    }
    path.push_back(raw[j]);
    i = j;
  }
  return path;
}

}  // namespace shoptraj::planner
