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

#include <cmath>
#include <vector>

#include "roadsafe/attacks.hpp"
#include "roadsafe/perception.hpp"
#include "roadsafe/types.hpp"

namespace roadsafe {
namespace {

Scenario three_lane_scenario() {
  Scenario s;
  s.id = "effects-fixture";
  s.road_type = RoadType::Street;
  for (int lane = 0; lane < 3; ++lane) {
    const double y = (lane - 1) * 3.5;
    s.lanes.push_back({{{-10.0, y}, {60.0, y}}, 3.5});
  }
  s.ego_context.road_type = RoadType::Street;
  s.ego_context.speed_range = road_speed_range(RoadType::Street);
  s.ego_context.initial_state = {{0.0, 0.0}, 7.0, 0.0, 0.0};

  ScenarioObject parked;
  parked.box.center = {15.0, 0.2, 0.75};
  parked.box.dims = {4.2, 1.7, 1.5};
  s.objects.push_back(parked);
  ScenarioObject moving;
  moving.box.center = {22.0, 3.5, 0.75};
  moving.box.dims = {4.0, 1.7, 1.5};
  moving.is_moving = true;
  moving.velocity = {6.5, 0.0};
  s.objects.push_back(moving);
  return s;
}

std::vector<ClassifiedObject> detections_of(const Scenario& s) {
  std::vector<ClassifiedObject> out;
  for (const ScenarioObject& o : s.objects) {
    out.push_back({o.box, o.is_moving, o.velocity});
  }
  return out;
}

bool same_box(const DetectedBox3D& a, const DetectedBox3D& b) {
  return a.center.x == b.center.x && a.center.y == b.center.y &&
         a.center.z == b.center.z && a.dims.x == b.dims.x &&
         a.yaw == b.yaw && a.score == b.score && a.is_ghost == b.is_ghost;
}

TEST_CASE("zero intensity is the identity for every effect kind") {
  const Scenario s = three_lane_scenario();
  const std::vector<ClassifiedObject> in = detections_of(s);
  for (EffectKind kind : {EffectKind::RoadsideGhosts,
                          EffectKind::OnRoadPatchGhost, EffectKind::BoxDrift}) {
    EffectModel model{kind, 0.0, GhostPlacement::Random, std::nullopt, 9};
    const auto out = inject_effect(in, s, model);
    REQUIRE(out.size() == in.size());
    for (size_t k = 0; k < in.size(); ++k) {
      REQUIRE(same_box(out[k].box, in[k].box));
    }
  }
}

TEST_CASE("roadside ghosts land off every lane with bounded scores") {
  const Scenario s = three_lane_scenario();
  const std::vector<ClassifiedObject> in = detections_of(s);
  int total_ghosts = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    EffectModel model{EffectKind::RoadsideGhosts, 4.0, GhostPlacement::Random,
                      std::nullopt, seed};
    const auto out = inject_effect(in, s, model);
    REQUIRE(out.size() >= in.size());
    // Real objects survive untouched, in order, at the front.
    for (size_t k = 0; k < in.size(); ++k) {
      REQUIRE(same_box(out[k].box, in[k].box));
      REQUIRE_FALSE(out[k].box.is_ghost);
    }
    for (size_t k = in.size(); k < out.size(); ++k) {
      ++total_ghosts;
      const ClassifiedObject& g = out[k];
      REQUIRE(g.box.is_ghost);
      REQUIRE_FALSE(g.is_moving);
      // Off-road oracle: the ghost center is inside no lane band.
      for (const Lane& lane : s.lanes) {
        REQUIRE_FALSE(lane.contains(g.box.center.xy()));
      }
      REQUIRE(g.box.center.x >= 0.0);
      REQUIRE(g.box.center.x <= 40.0);
      REQUIRE(g.box.score >= 0.6);
      REQUIRE(g.box.score <= 1.0);
      REQUIRE(g.box.dims.x == kGhostDims.x);
      REQUIRE(g.box.dims.y == kGhostDims.y);
    }
  }
  // Poisson mean check: 100 draws at rate 4 -> mean in [3.4, 4.6] with
  // overwhelming probability (sd of the mean is 0.2).
  const double mean = total_ghosts / 100.0;
  CHECK(mean > 3.4);
  CHECK(mean < 4.6);
}

TEST_CASE("random on-road ghost blocks some lane ahead of the ego") {
  const Scenario s = three_lane_scenario();
  const std::vector<ClassifiedObject> in = detections_of(s);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    EffectModel model{EffectKind::OnRoadPatchGhost, 1.0,
                      GhostPlacement::Random, std::nullopt, seed};
    const auto out = inject_effect(in, s, model);
    REQUIRE(out.size() == in.size() + 1);  // intensity 1 => always present
    const ClassifiedObject& g = out.back();
    REQUIRE(g.box.is_ghost);
    REQUIRE(g.box.center.x >= 5.0);
    REQUIRE(g.box.center.x <= 40.0);
    bool on_road = false;
    for (const Lane& lane : s.lanes) {
      if (lane.contains(g.box.center.xy())) on_road = true;
    }
    REQUIRE(on_road);
    REQUIRE(g.box.score >= 0.5);
    REQUIRE(g.box.score <= 0.75);
  }
}

TEST_CASE("specific on-road ghost sits in the intention lane near the goal") {
  const Scenario s = three_lane_scenario();  // ego in the middle lane (y=0)
  const std::vector<ClassifiedObject> in = detections_of(s);
  struct Case {
    Intention intention;
    double lane_y;
  };
  for (const Case& c : {Case{Intention::Left, 3.5},
                        Case{Intention::Straight, 0.0},
                        Case{Intention::Right, -3.5}}) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      EffectModel model{EffectKind::OnRoadPatchGhost, 1.0,
                        GhostPlacement::Specific, c.intention, seed};
      const auto out = inject_effect(in, s, model);
      REQUIRE(out.size() == in.size() + 1);
      const ClassifiedObject& g = out.back();
      // Straddles the 15 m goal region of that lane.
      REQUIRE(g.box.center.x >= 12.0);
      REQUIRE(g.box.center.x <= 18.0);
      REQUIRE(std::abs(g.box.center.y - c.lane_y) <= 0.5 + 1e-12);
    }
  }
}

TEST_CASE("fractional ghost probability is honored on average") {
  const Scenario s = three_lane_scenario();
  const std::vector<ClassifiedObject> in = detections_of(s);
  int present = 0;
  const int trials = 400;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    EffectModel model{EffectKind::OnRoadPatchGhost, 0.3,
                      GhostPlacement::Random, std::nullopt, seed};
    if (inject_effect(in, s, model).size() > in.size()) ++present;
  }
  // Binomial(400, 0.3): mean 120, sd ~9.2.
  CHECK(present > 80);
  CHECK(present < 160);
}

TEST_CASE("box drift perturbs real boxes but never ghosts") {
  const Scenario s = three_lane_scenario();
  std::vector<ClassifiedObject> in = detections_of(s);
  in.push_back(attack_detail::make_ghost({12.0, 6.0}, 0.0, 0.8));
  const double sigma = 0.2;
  double sum_sq = 0.0;
  int samples = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    EffectModel model{EffectKind::BoxDrift, sigma, GhostPlacement::Random,
                      std::nullopt, seed};
    const auto out = inject_effect(in, s, model);
    REQUIRE(out.size() == in.size());
    // Ghost untouched.
    REQUIRE(same_box(out.back().box, in.back().box));
    for (size_t k = 0; k + 1 < out.size(); ++k) {
      const double dx = out[k].box.center.x - in[k].box.center.x;
      const double dy = out[k].box.center.y - in[k].box.center.y;
      sum_sq += dx * dx + dy * dy;
      samples += 2;
      const double dyaw =
          normalize_angle(out[k].box.yaw - in[k].box.yaw);
      REQUIRE(std::abs(dyaw) <= deg2rad(5.0) + 1e-12);
      REQUIRE(out[k].box.score >= 1.0 - 2.0 * sigma - 1e-12);
      REQUIRE(out[k].box.score <= 1.0);
      // Dims are never altered by drift.
      REQUIRE(out[k].box.dims.x == in[k].box.dims.x);
    }
  }
  // Empirical standard deviation of the center drift matches sigma.
  const double sd = std::sqrt(sum_sq / samples);
  CHECK(sd > 0.8 * sigma);
  CHECK(sd < 1.2 * sigma);
}

TEST_CASE("effect injection is deterministic per seed") {
  const Scenario s = three_lane_scenario();
  const std::vector<ClassifiedObject> in = detections_of(s);
  EffectModel model{EffectKind::RoadsideGhosts, 3.0, GhostPlacement::Random,
                    std::nullopt, 321};
  const auto a = inject_effect(in, s, model);
  const auto b = inject_effect(in, s, model);
  REQUIRE(a.size() == b.size());
  for (size_t k = 0; k < a.size(); ++k) {
    REQUIRE(same_box(a[k].box, b[k].box));
  }
  model.seed = 322;
  const auto c = inject_effect(in, s, model);
  bool differs = c.size() != a.size();
  for (size_t k = 0; !differs && k < a.size(); ++k) {
    differs = !same_box(a[k].box, c[k].box);
  }
  CHECK(differs);
}

}  // namespace
}  // namespace roadsafe
