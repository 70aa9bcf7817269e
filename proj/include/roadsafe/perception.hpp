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

#ifndef ROADSAFE_PERCEPTION_HPP_
#define ROADSAFE_PERCEPTION_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "roadsafe/rng.hpp"
#include "roadsafe/types.hpp"

namespace roadsafe {

// Displacement rule constants separating parked from crawling traffic.
inline constexpr double kMotionSpeedThreshold = 0.5;  // m/s
inline constexpr double kMotionAssociationRadius = 2.0;  // m

/// Displacement-rule motion classifier. Boxes are associated to the
/// temporally closest frame by smallest-distance-first matching within
/// 2 m; displacement over the frame gap above 0.5 m/s marks the object
/// moving. Unassociated boxes and missing frames default to static, which
/// is the conservative choice for planning.
inline std::vector<ClassifiedObject> classify_motion(
    const std::vector<DetectedBox3D>& boxes,
    const std::vector<FrameObservation>& frames) {
  std::vector<ClassifiedObject> out;
  out.reserve(boxes.size());
  for (const DetectedBox3D& box : boxes) out.push_back({box, false, {}});

  const FrameObservation* frame = nullptr;
  for (const FrameObservation& f : frames) {
    if (f.t == 0.0) continue;
    if (frame == nullptr || std::abs(f.t) < std::abs(frame->t)) frame = &f;
  }
  if (frame == nullptr) return out;

  struct Pair {
    double dist;
    int box;
    int pos;
  };
  std::vector<Pair> pairs;
  for (size_t b = 0; b < boxes.size(); ++b) {
    for (size_t p = 0; p < frame->positions.size(); ++p) {
      const double dist = (boxes[b].center.xy() - frame->positions[p]).norm();
      if (dist <= kMotionAssociationRadius) {
        pairs.push_back({dist, static_cast<int>(b), static_cast<int>(p)});
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.box != b.box) return a.box < b.box;
    return a.pos < b.pos;
  });

  std::vector<bool> box_used(boxes.size(), false);
  std::vector<bool> pos_used(frame->positions.size(), false);
  for (const Pair& pr : pairs) {
    if (box_used[pr.box] || pos_used[pr.pos]) continue;
    box_used[pr.box] = true;
    pos_used[pr.pos] = true;
    // Displacement from the observation toward t = 0.
    const Vec2 disp = frame->t < 0.0
                          ? boxes[pr.box].center.xy() - frame->positions[pr.pos]
                          : frame->positions[pr.pos] - boxes[pr.box].center.xy();
    const double gap = std::abs(frame->t);
    const Vec2 velocity = disp * (1.0 / gap);
    if (velocity.norm() > kMotionSpeedThreshold) {
      out[pr.box].is_moving = true;
      out[pr.box].velocity = velocity;
    }
  }
  return out;
}

/// Rule-based constraint selector: road type fixes the speed range and
/// primitive dynamics; the ego initial speed is drawn uniformly from the
/// range with a per-scenario stream derived from the experiment seed.
inline PlanningContext select_constraints(const Scenario& s,
                                          std::uint64_t experiment_seed) {
  PlanningContext ctx = s.ego_context;
  ctx.road_type = s.road_type;
  ctx.speed_range = road_speed_range(s.road_type);
  Rng rng(mix_seed(experiment_seed, hash_string(s.id)));
  ctx.initial_state.v = rng.uniform(ctx.speed_range.first,
                                    ctx.speed_range.second);
  return ctx;
}

}  // namespace roadsafe

#endif  // ROADSAFE_PERCEPTION_HPP_
