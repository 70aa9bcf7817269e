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

#ifndef ROADSAFE_COLLISION_HPP_
#define ROADSAFE_COLLISION_HPP_

#include <optional>
#include <vector>

#include "roadsafe/geom.hpp"
#include "roadsafe/types.hpp"

namespace roadsafe {

struct CollisionResult {
  bool collided{false};
  std::optional<int> first_time_index;
  std::optional<int> object_id;
};

/// Constant-velocity, constant-heading occupancy prediction.
inline OrientedRect predict_occupancy(const ClassifiedObject& obj, double t) {
  OrientedRect rect = obj.box.footprint();
  if (obj.is_moving) rect.center = rect.center + obj.velocity * t;
  return rect;
}

inline OrientedRect ego_footprint(const VehicleState& s,
                                  double length = kEgoLength,
                                  double width = kEgoWidth) {
  return {s.p, {length * 0.5, width * 0.5}, s.phi};
}

/// Discrete-time contact test: the ego rect at each trajectory state is
/// tested against every object's predicted occupancy at the same time.
/// The earliest contact is reported. dt = 0.1 s bounds tunneling below
/// 13 m/s since the max step of 1.3 m is shorter than a car.
inline CollisionResult check_trajectory(
    const Trajectory& traj, const std::vector<ClassifiedObject>& objects,
    Vec2 ego_dims = {kEgoLength, kEgoWidth}) {
  for (size_t t = 0; t < traj.states.size(); ++t) {
    const OrientedRect ego =
        ego_footprint(traj.states[t], ego_dims.x, ego_dims.y);
    const double time = static_cast<double>(t) * traj.dt;
    for (size_t k = 0; k < objects.size(); ++k) {
      if (obb_intersect(ego, predict_occupancy(objects[k], time))) {
        return {true, static_cast<int>(t), static_cast<int>(k)};
      }
    }
  }
  return {};
}

}  // namespace roadsafe

#endif  // ROADSAFE_COLLISION_HPP_
