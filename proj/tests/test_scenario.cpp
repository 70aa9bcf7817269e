// Copyright 2026 The Roadsafe Authors
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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <string>

#include "roadsafe/types.hpp"

namespace roadsafe {
namespace {

Scenario two_lane_street() {
  Scenario s;
  s.id = "test";
  s.road_type = RoadType::Street;
  s.lanes.push_back({{{-10.0, 0.0}, {60.0, 0.0}}, 3.5});
  s.lanes.push_back({{{-10.0, 3.5}, {60.0, 3.5}}, 3.5});
  s.ego_context.road_type = RoadType::Street;
  s.ego_context.speed_range = road_speed_range(RoadType::Street);
  s.ego_context.initial_state = {{0.0, 0.0}, 7.0, 0.0, 0.0};
  ScenarioObject car;
  car.box.center = {20.0, 0.0, 0.75};
  car.box.dims = {4.0, 1.7, 1.5};
  s.objects.push_back(car);
  return s;
}

bool has_violation_containing(const ValidationResult& r,
                              const std::string& needle) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const std::string& v) {
                       return v.find(needle) != std::string::npos;
                     });
}

TEST_CASE("well-formed two-lane street scenario validates") {
  const ValidationResult r = validate_scenario(two_lane_street());
  CHECK(r.ok());
  CHECK(r.violations.empty());
}

TEST_CASE("zero-width box is reported") {
  Scenario s = two_lane_street();
  s.objects[0].box.dims.y = 0.0;
  const ValidationResult r = validate_scenario(s);
  CHECK_FALSE(r.ok());
  CHECK(has_violation_containing(r, "dims strictly positive"));
}

TEST_CASE("ego outside all lanes is reported") {
  Scenario s = two_lane_street();
  // 1 m beyond the outer lane edge: lane edges span y in [-1.75, 5.25].
  s.ego_context.initial_state.p = {0.0, -2.75};
  // Independent point-in-polygon oracle over the lane rectangles.
  bool inside_any = false;
  for (const Lane& lane : s.lanes) {
    const std::vector<Vec2> poly{
        {lane.centerline.front().x, lane.centerline.front().y - lane.width / 2},
        {lane.centerline.back().x, lane.centerline.back().y - lane.width / 2},
        {lane.centerline.back().x, lane.centerline.back().y + lane.width / 2},
        {lane.centerline.front().x,
         lane.centerline.front().y + lane.width / 2}};
    if (point_in_convex_polygon(s.ego_context.initial_state.p, poly)) {
      inside_any = true;
    }
  }
  REQUIRE_FALSE(inside_any);
  const ValidationResult r = validate_scenario(s);
  CHECK_FALSE(r.ok());
  CHECK(has_violation_containing(r, "ego within lane"));
}

TEST_CASE("all violations are collected, not just the first") {
  Scenario s = two_lane_street();
  s.objects[0].box.dims.x = -1.0;
  s.objects[0].box.score = 1.5;
  s.ego_context.initial_state.p = {0.0, -50.0};
  const ValidationResult r = validate_scenario(s);
  CHECK(r.violations.size() >= 3);
  CHECK(has_violation_containing(r, "dims strictly positive"));
  CHECK(has_violation_containing(r, "score in [0,1]"));
  CHECK(has_violation_containing(r, "ego within lane"));
}

TEST_CASE("validate_scenario is idempotent and side-effect free") {
  const Scenario s = two_lane_street();
  const ValidationResult a = validate_scenario(s);
  const ValidationResult b = validate_scenario(s);
  CHECK(a.violations == b.violations);
}

TEST_CASE("static object with nonzero velocity is reported") {
  Scenario s = two_lane_street();
  s.objects[0].is_moving = false;
  s.objects[0].velocity = {1.0, 0.0};
  CHECK(has_violation_containing(validate_scenario(s),
                                 "static object with nonzero velocity"));
}

TEST_CASE("moving object above road speed maximum is reported") {
  Scenario s = two_lane_street();
  s.objects[0].is_moving = true;
  s.objects[0].velocity = {20.0, 0.0};  // street max is ~8.06 m/s
  CHECK(has_violation_containing(validate_scenario(s),
                                 "velocity exceeds road-type speed maximum"));
}

TEST_CASE("road-type speed ranges") {
  const auto street = road_speed_range(RoadType::Street);
  CHECK(street.first == Catch::Approx(22.0 / 3.6));
  CHECK(street.second == Catch::Approx(29.0 / 3.6));
  const auto highway = road_speed_range(RoadType::Highway);
  CHECK(highway.first == Catch::Approx(40.0 / 3.6));
  CHECK(highway.second == Catch::Approx(47.0 / 3.6));
}

TEST_CASE("goal region containment respects heading") {
  GoalRegion goal;
  goal.center = {15.0, 0.0};
  goal.half_extent = {2.0, 1.75};
  CHECK(goal.contains({15.0, 0.0}));
  CHECK(goal.contains({16.9, 1.7}));
  CHECK_FALSE(goal.contains({17.1, 0.0}));
  goal.heading = deg2rad(90.0);  // rotated: longitudinal axis now along y
  CHECK(goal.contains({15.0, 1.9}));
  CHECK_FALSE(goal.contains({16.9, 0.0}));
}

}  // namespace
}  // namespace roadsafe
