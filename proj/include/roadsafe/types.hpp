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

#ifndef ROADSAFE_TYPES_HPP_
#define ROADSAFE_TYPES_HPP_

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "roadsafe/geom.hpp"

namespace roadsafe {

// Global planning time step (seconds).
inline constexpr double kDt = 0.1;

// Ego vehicle BEV footprint (meters).
inline constexpr double kEgoLength = 4.5;
inline constexpr double kEgoWidth = 1.8;

// Kinematic bicycle wheelbase (meters).
inline constexpr double kWheelbase = 2.7;

// Goal region distance ahead of the ego start (meters).
inline constexpr double kGoalDistance = 15.0;

inline constexpr double kmh_to_ms(double kmh) { return kmh / 3.6; }

enum class ClassLabel { Car };
enum class RoadType { Street, Highway };
enum class Intention { Left, Straight, Right };

inline const char* to_string(Intention i) {
  switch (i) {
    case Intention::Left: return "left";
    case Intention::Straight: return "straight";
    case Intention::Right: return "right";
  }
  return "?";
}

inline const char* to_string(RoadType r) {
  return r == RoadType::Street ? "street" : "highway";
}

/// Speed range (m/s) the constraint selector assigns per road type.
inline std::pair<double, double> road_speed_range(RoadType road) {
  if (road == RoadType::Street) return {kmh_to_ms(22.0), kmh_to_ms(29.0)};
  return {kmh_to_ms(40.0), kmh_to_ms(47.0)};
}

/// One detected 3D bounding box in the ego BEV frame (x forward, y left,
/// z up). Ground-truth boxes carry score = 1.
struct DetectedBox3D {
  Vec3 center;
  Vec3 dims;  // (length, width, height)
  double yaw{0.0};
  ClassLabel class_label{ClassLabel::Car};
  double score{1.0};
  bool is_ghost{false};  // provenance: injected by an effect model

  OrientedRect footprint() const {
    return {center.xy(), {dims.x * 0.5, dims.y * 0.5}, yaw};
  }
};

struct ClassifiedObject {
  DetectedBox3D box;
  bool is_moving{false};
  Vec2 velocity;  // BEV m/s, zero when static
};

struct VehicleState {
  Vec2 p;
  double v{0.0};      // speed, m/s
  double phi{0.0};    // heading, rad
  double omega{0.0};  // steering angle, rad
};

struct DynamicsLimits {
  double a_max{2.5};           // m/s^2
  double jerk_max{10.0};       // m/s^3
  double omega_max{0.6};       // rad
  double omega_rate_max{0.4};  // rad/s
};

struct PlanningContext {
  VehicleState initial_state;
  std::pair<double, double> speed_range;  // m/s
  DynamicsLimits dynamics;
  RoadType road_type{RoadType::Street};
};

struct GoalRegion {
  Vec2 center;
  Vec2 half_extent;  // (longitudinal, lateral)
  Intention intention{Intention::Straight};
  double heading{0.0};  // lane direction at the goal

  bool contains(const Vec2& p) const {
    const Vec2 d = (p - center).rotated(-heading);
    return std::abs(d.x) <= half_extent.x && std::abs(d.y) <= half_extent.y;
  }
};

struct Lane {
  std::vector<Vec2> centerline;
  double width{3.5};

  bool contains(const Vec2& p) const {
    return point_polyline_distance(p, centerline) <= width * 0.5;
  }
};

struct ScenarioObject {
  DetectedBox3D box;  // ground truth
  bool is_moving{false};
  Vec2 velocity;
};

/// Object center observations at a time offset relative to the scenario
/// start (negative = prior frame).
struct FrameObservation {
  double t{0.0};
  std::vector<Vec2> positions;
};

struct Scenario {
  std::string id;
  RoadType road_type{RoadType::Street};
  std::vector<Lane> lanes;
  PlanningContext ego_context;
  std::vector<ScenarioObject> objects;
  std::vector<FrameObservation> frames;
};

struct Trajectory {
  std::vector<VehicleState> states;
  double dt{kDt};
};

struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every scenario invariant and reports all violations, not just
/// the first one.
inline ValidationResult validate_scenario(const Scenario& s) {
  ValidationResult r;
  auto fail = [&r](std::string msg) { r.violations.push_back(std::move(msg)); };

  if (s.lanes.empty()) fail("scenario has no lanes");
  for (size_t i = 0; i < s.lanes.size(); ++i) {
    if (!(s.lanes[i].width > 0.0)) {
      fail("lanes[" + std::to_string(i) + "]: width strictly positive");
    }
    if (s.lanes[i].centerline.size() < 2) {
      fail("lanes[" + std::to_string(i) + "]: centerline needs >= 2 points");
    }
  }

  bool ego_in_lane = false;
  for (const Lane& lane : s.lanes) {
    if (lane.contains(s.ego_context.initial_state.p)) ego_in_lane = true;
  }
  if (!ego_in_lane) fail("ego within lane");

  const auto& ctx = s.ego_context;
  if (!(ctx.speed_range.first <= ctx.speed_range.second)) {
    fail("speed_range.min <= speed_range.max");
  }
  if (!(ctx.initial_state.v >= 0.0)) fail("ego speed >= 0");
  if (!(std::abs(ctx.initial_state.omega) <= ctx.dynamics.omega_max)) {
    fail("|omega| <= omega_max");
  }
  if (!(ctx.dynamics.a_max > 0.0 && ctx.dynamics.jerk_max > 0.0 &&
        ctx.dynamics.omega_max > 0.0 && ctx.dynamics.omega_rate_max > 0.0)) {
    fail("dynamics limits strictly positive");
  }

  const double speed_max = road_speed_range(s.road_type).second;
  for (size_t i = 0; i < s.objects.size(); ++i) {
    const auto& obj = s.objects[i];
    const std::string tag = "objects[" + std::to_string(i) + "]: ";
    if (!(obj.box.dims.x > 0.0 && obj.box.dims.y > 0.0 &&
          obj.box.dims.z > 0.0)) {
      fail(tag + "dims strictly positive");
    }
    if (!(obj.box.score >= 0.0 && obj.box.score <= 1.0)) {
      fail(tag + "score in [0,1]");
    }
    if (std::abs(normalize_angle(obj.box.yaw) - obj.box.yaw) > 1e-12) {
      fail(tag + "yaw normalized to (-pi, pi]");
    }
    if (!obj.is_moving && obj.velocity.norm() != 0.0) {
      fail(tag + "static object with nonzero velocity");
    }
    if (obj.is_moving && obj.velocity.norm() > speed_max + 1e-9) {
      fail(tag + "velocity exceeds road-type speed maximum");
    }
  }
  return r;
}

}  // namespace roadsafe

#endif  // ROADSAFE_TYPES_HPP_
