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


#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "shoptraj/errors.hpp"
#include "shoptraj/planner/collision.hpp"
#include "shoptraj/planner/dwa.hpp"
#include "shoptraj/planner/generator.hpp"
#include "shoptraj/planner/params.hpp"
#include "shoptraj/planner/ranks.hpp"
#include "shoptraj/planner/roadmap.hpp"
#include "shoptraj/planner/trajectory.hpp"
#include "test_support.hpp"

namespace shoptraj::planner
{
namespace
{

using nlohmann::json;

const StoreMap & seen() { return testing::seen_map(); }

const TrajectoryGenerator & generator()
{
  static const TrajectoryGenerator g(seen(), PlannerParams{}, 11);
  return g;
}

std::string config_code(const std::function<void(PlannerParams &)> & edit)
{
  PlannerParams p;
  edit(p);
  try {
    p.validate();
  } catch (const ConfigError & e) {
    return e.code();
  }
  return "ok";
}

TEST(Params, Validation)
{
  EXPECT_EQ(config_code([](PlannerParams &) {}), "ok");
  EXPECT_EQ(config_code([](PlannerParams & p) { p.dt = 0.0; }), "config_error");
  EXPECT_EQ(config_code([](PlannerParams & p) { p.n_v = 0; }), "config_error");
  EXPECT_EQ(config_code([](PlannerParams & p) { p.rank_sigma = {0, 2, 1, 3, 4}; }), "config_error");
  EXPECT_EQ(config_code([](PlannerParams & p) { p.w_heading = p.w_clearance = p.w_velocity = 0; }), "config_error");
  EXPECT_EQ(config_code([](PlannerParams & p) { p.prm_clearance_margin = -0.1; }), "config_error");
  EXPECT_THROW(PlannerParams{}.sigma_for(0), PlanningError);
  EXPECT_THROW(PlannerParams{}.sigma_for(6), PlanningError);
  EXPECT_EQ(PlannerParams{}.interest_dwell_steps(), 2);
}

TEST(Params, JsonRoundTrip)
{
  PlannerParams p;
  p.v_max = 0.9;
  p.rank_sigma = {0.1, 0.2, 0.3, 0.4, 0.5};
  const PlannerParams q = planner_params_from_json(to_json(p));
  EXPECT_DOUBLE_EQ(q.v_max, 0.9);
  EXPECT_DOUBLE_EQ(q.rank_sigma[4], 0.5);
  EXPECT_EQ(to_json(q), to_json(p));
}

TEST(Collision, SegmentFreeAgreesWithDenseSampling)
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0.0, seen().width());
  std::uniform_real_distribution<double> uy(0.0, seen().height());
  const double r = seen().agent_radius();
  int free_count = 0;
  for (int k = 0; k < 400; ++k) {
    const Point2 a{ux(rng), uy(rng)};
    const Point2 b = a + Point2{ux(rng) - seen().width() / 2, uy(rng) - seen().height() / 2} * 0.2;
    if (!segment_free(seen(), a, b, r, 0.125)) {
      continue;
    }
    ++free_count;
    for (int i = 0; i <= 1000; ++i) {
      const Point2 p = a + (b - a) * (i / 1000.0);
      ASSERT_GT(seen().clearance(p), r);
    }
  }
  EXPECT_GT(free_count, 50);
}

TEST(Collision, ClearanceFieldIsALowerBound)
{
  const ClearanceField field(seen(), 0.1);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ux(0.0, seen().width());
  std::uniform_real_distribution<double> uy(0.0, seen().height());
  for (int k = 0; k < 5000; ++k) {
    const Point2 p{ux(rng), uy(rng)};
    EXPECT_LE(field.lower_bound(p), seen().clearance(p) + 1e-12);
  }
  EXPECT_LT(field.lower_bound({-1.0, 1.0}), 0.0);
}

TEST(Roadmap, NodesAndEdgesKeepTheMargin)
{
  const Roadmap & rm = generator().roadmap();
  const double inflated = rm.agent_radius() + rm.clearance_margin();
  EXPECT_EQ(rm.nodes().size(), static_cast<std::size_t>(PlannerParams{}.prm_samples));
  for (const auto & n : rm.nodes()) {
    ASSERT_GT(seen().clearance(n), inflated);
  }
  for (const auto & e : rm.edges()) {
    ASSERT_LE(e.length, rm.connection_radius());
    ASSERT_NEAR(e.length, distance(rm.nodes()[e.a], rm.nodes()[e.b]), 1e-12);
  }
}

TEST(Roadmap, SameSeedSameRoadmap)
{
  std::mt19937_64 a(5);
  std::mt19937_64 b(5);
  PlannerParams p;
  p.prm_samples = 100;
  const Roadmap ra = build_roadmap(seen(), p, a);
  const Roadmap rb = build_roadmap(seen(), p, b);
  ASSERT_EQ(ra.nodes().size(), rb.nodes().size());
  for (std::size_t i = 0; i < ra.nodes().size(); ++i) {
    EXPECT_EQ(ra.nodes()[i], rb.nodes()[i]);
  }
  EXPECT_EQ(ra.edges().size(), rb.edges().size());
}

TEST(Roadmap, PlanGlobalContracts)
{
  const Roadmap & rm = generator().roadmap();
  const Point2 e = seen().entrance();
  EXPECT_EQ(plan_global(rm, e, e).size(), 1u);
  const Point2 near = e + Point2{1.0, 0.0};
  const auto direct = plan_global(rm, e, near);
  ASSERT_EQ(direct.size(), 2u);
  EXPECT_DOUBLE_EQ(path_length(direct), 1.0);

  const Point2 goal = generator().cashier_goal();
  const auto path = plan_global(rm, e, goal);
  EXPECT_EQ(path.front(), e);
  EXPECT_EQ(path.back(), goal);
  for (std::size_t i = 1; i < path.size(); ++i) {
    EXPECT_TRUE(segment_free(seen(), path[i - 1], path[i], seen().agent_radius(), 0.01));
  }
  EXPECT_GE(path_length(path), distance(e, goal) - 1e-9);

  const Point2 inside = seen().shelves()[0].rect.center();
  try {
    plan_global(rm, e, inside);
    FAIL();
  } catch (const PlanningError & err) {
    EXPECT_EQ(err.code(), "not_free");
  }
}

TEST(Dwa, WindowRespectsLimits)
{
  const PlannerParams p;
  KinematicState s;
  s.v = 1.0;
  s.omega = 3.0;
  const DynamicWindow w = dynamic_window(s, p, p.v_max);
  EXPECT_DOUBLE_EQ(w.v_hi, p.v_max);
  EXPECT_DOUBLE_EQ(w.v_lo, 1.0 - p.a_max * p.dt);
  EXPECT_DOUBLE_EQ(w.omega_hi, p.omega_max);
  EXPECT_DOUBLE_EQ(w.omega_lo, 3.0 - p.alpha_max * p.dt);
  s.v = 0.0;
  EXPECT_DOUBLE_EQ(dynamic_window(s, p, p.v_max).v_lo, 0.0);
}

TEST(Dwa, IntegrateMatchesClosedForm)
{
  KinematicState s;
  s.position = {1.0, 2.0};
  s.heading = 0.0;
  const KinematicState straight = integrate(s, {1.0, 0.0}, 2.0);
  EXPECT_NEAR(straight.position.x, 3.0, 1e-12);
  EXPECT_NEAR(straight.position.y, 2.0, 1e-12);
  // Half circle of radius 1 turning left.
  const KinematicState arc = integrate(s, {1.0, 1.0}, M_PI);
  EXPECT_NEAR(arc.position.x, 1.0, 1e-9);
  EXPECT_NEAR(arc.position.y, 4.0, 1e-9);
  EXPECT_NEAR(std::abs(arc.heading), M_PI, 1e-9);
  const KinematicState spin = integrate(s, {0.0, 1.0}, 1.0);
  EXPECT_EQ(spin.position, s.position);
  EXPECT_NEAR(spin.heading, 1.0, 1e-12);
}

TEST(Dwa, BrakingDistance)
{
  const PlannerParams p;  // a_max * dt = 0.4
  EXPECT_DOUBLE_EQ(braking_distance(0.0, p), 0.0);
  EXPECT_DOUBLE_EQ(braking_distance(0.4, p), 0.0);
  EXPECT_NEAR(braking_distance(1.2, p), (0.8 + 0.4) * 0.5, 1e-12);
}

TEST(Dwa, ChosenCommandIsAdmissibleAndFree)
{
  const PlannerParams p;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ux(0.0, seen().width());
  std::uniform_real_distribution<double> uy(0.0, seen().height());
  std::uniform_real_distribution<double> uh(-M_PI, M_PI);
  std::uniform_real_distribution<double> uv(0.0, p.v_max);
  int checked = 0;
  while (checked < 200) {
    KinematicState s;
    s.position = {ux(rng), uy(rng)};
    if (!seen().is_free(s.position, seen().agent_radius() + 0.3)) {
      continue;
    }
    s.heading = uh(rng);
    s.v = uv(rng);
    const Point2 goal{ux(rng), uy(rng)};
    const DwaResult r = plan_local_dwa(seen(), s, goal, p);
    ++checked;
    if (r.emergency_stop) {
      continue;
    }
    EXPECT_TRUE(r.window.contains(r.command));
    EXPECT_TRUE(rollout_free(seen(), s, r.command, p));
    EXPECT_GT(seen().clearance(r.next.position), seen().agent_radius());
  }
}

TEST(Ranks, ScaleAndDeterministicOrder)
{
  EXPECT_GT(rank_scale(seen()), 0.0);
  const auto cats = seen().categories();
  pipeline::ItemLists lists;
  lists.purchase = {seen().items_in_category(cats.back())[0]->id, seen().items_in_category(cats.front())[0]->id};
  lists.interest = {seen().items_in_category(cats[1])[0]->id};
  std::mt19937_64 rng(1);
  const RankAssignment r = sample_category_ranks(seen(), lists, 1, PlannerParams{}, rng);
  // Consideration 1 has sigma 0: base rank order.
  EXPECT_EQ(r.visit_order, (std::vector<std::string>{lists.purchase[1], lists.interest[0], lists.purchase[0]}));
  EXPECT_EQ(r.sampled_rank.size(), cats.size());
  for (const auto & c : cats) {
    EXPECT_DOUBLE_EQ(r.sampled_rank.at(c), seen().category_base_ranks().at(c));
  }
}

TEST(Ranks, StreamDoesNotDependOnLists)
{
  const auto & items = seen().items();
  std::mt19937_64 a(77);
  std::mt19937_64 b(77);
  sample_category_ranks(seen(), {{items[0].id}, {}}, 4, PlannerParams{}, a);
  sample_category_ranks(seen(), {{items[5].id, items[9].id}, {items[20].id}}, 4, PlannerParams{}, b);
  EXPECT_EQ(a(), b());
  std::mt19937_64 c(1);
  EXPECT_THROW(sample_category_ranks(seen(), {}, 3, PlannerParams{}, c), PlanningError);
  EXPECT_THROW(sample_category_ranks(seen(), {{"nope"}, {}}, 3, PlannerParams{}, c), PlanningError);
}

TEST(Trajectory, SnapAndJsonLine)
{
  EXPECT_EQ(snap({1.23456, -0.0004}), (Point2{1.235, 0.0}));
  AnnotatedTrajectory t;
  t.caption_id = "c-1";
  t.map_id = "seen";
  t.provenance = Provenance::human;
  t.positions = {{1.5, 1.0}, {1.75, -0.0}};
  t.items_in_contact = {"a", "b"};
  t.purchased = {"b"};
  const std::string line = to_json_line(t);
  EXPECT_NE(line.find("\"positions\":[[1.500,1.000],[1.750,0.000]]"), std::string::npos);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const AnnotatedTrajectory back = parse_trajectory_line(line);
  EXPECT_EQ(back.caption_id, "c-1");
  EXPECT_EQ(back.provenance, Provenance::human);
  EXPECT_EQ(back.positions, t.positions);
  EXPECT_EQ(back.items_in_contact, t.items_in_contact);
  EXPECT_EQ(to_json_line(back), line);
  EXPECT_EQ(provenance_from_string("synthesized"), Provenance::synthesized);
}

std::set<std::string> codes(const std::vector<Violation> & v)
{
  std::set<std::string> out;
  for (const auto & x : v) {
    out.insert(x.code);
  }
  return out;
}

TEST(Trajectory, CheckFlagsEachViolation)
{
  const StoreMap & m = seen();
  AnnotatedTrajectory t;
  t.map_id = m.id();
  t.positions = {m.entrance(), m.cashier().center()};
  t.items_in_contact = annotate_contacts(m, t.positions);
  EXPECT_EQ(codes(check_trajectory(m, t, 100.0)), (std::set<std::string>{}));
  EXPECT_EQ(codes(check_trajectory(m, t, 0.6)), (std::set<std::string>{"kinematic_bound"}));

  AnnotatedTrajectory bad = t;
  bad.positions.insert(bad.positions.begin() + 1, m.shelves()[0].rect.center());
  bad.items_in_contact = annotate_contacts(m, bad.positions);
  bad.purchased = {"ghost", t.items_in_contact[0], t.items_in_contact[0]};
  bad.emergency_stops = 1;
  EXPECT_EQ(
    codes(check_trajectory(m, bad, 100.0)),
    (std::set<std::string>{"collision", "unknown_item", "purchase_not_in_contact", "duplicate_purchase", "emergency_stop"}));

  AnnotatedTrajectory swapped = t;
  std::swap(swapped.positions[0], swapped.positions[1]);
  EXPECT_EQ(
    codes(check_trajectory(m, swapped, 100.0)),
    (std::set<std::string>{"start_not_entrance", "end_not_cashier", "contact_mismatch"}));
  swapped.items_in_contact.pop_back();
  EXPECT_TRUE(codes(check_trajectory(m, swapped, 100.0)).contains("length_mismatch"));
  swapped.map_id = "other";
  EXPECT_EQ(codes(check_trajectory(m, swapped, 100.0)), (std::set<std::string>{"map_mismatch"}));
}

TEST(Generator, ApproachPointsAreFreeAndFaceTheItem)
{
  for (const auto & item : seen().items()) {
    const auto p = generator().approach_point(item);
    ASSERT_TRUE(p) << item.id;
    EXPECT_TRUE(seen().is_free(*p, seen().agent_radius()));
    EXPECT_LT(distance(*p, item.position), 1.5);
  }
  EXPECT_TRUE(seen().cashier().contains(generator().cashier_goal()));
  EXPECT_LT(generator().effective_v_max(), PlannerParams{}.v_max);
}

TEST(Generator, TrajectorySatisfiesInvariants)
{
  const auto & items = seen().items();
  const pipeline::ItemLists lists{{items[3].id, items[40].id}, {items[17].id}};
  std::mt19937_64 rng(123);
  int observed = 0;
  const GenerationResult r = generator().generate(
    lists, 3, rng, [&](const KinematicState &, Point2, const DwaResult &) { ++observed; });
  const AnnotatedTrajectory & t = r.trajectory;
  const PlannerParams p;
  EXPECT_TRUE(check_trajectory(seen(), t, p.v_max * p.dt).empty());
  EXPECT_EQ(t.purchased, (std::vector<std::string>{items[3].id, items[40].id}));
  EXPECT_EQ(t.emergency_stops, 0);
  EXPECT_GT(observed, 0);
  const std::set<std::string> contacts(t.items_in_contact.begin(), t.items_in_contact.end());
  EXPECT_TRUE(contacts.contains(items[17].id));
  for (const auto & pos : t.positions) {
    EXPECT_EQ(snap(pos), pos);
  }

  std::mt19937_64 again(123);
  EXPECT_EQ(to_json_line(generator().generate(lists, 3, again).trajectory), to_json_line(t));
}

TEST(Generator, UnknownItemIsRejected)
{
  std::mt19937_64 rng(1);
  EXPECT_THROW(generator().generate({{"no-such-item"}, {}}, 2, rng), PlanningError);
}

}  // namespace
}  // namespace shoptraj::planner
