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

#ifndef ROADSAFE_PLANNER_HPP_
#define ROADSAFE_PLANNER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <tuple>
#include <vector>

#include "roadsafe/collision.hpp"
#include "roadsafe/geom.hpp"
#include "roadsafe/types.hpp"

namespace roadsafe {

/// One sampled control segment: constant acceleration and steering rate
/// held for `duration` seconds, integrated under the kinematic bicycle
/// model at the global dt.
struct MotionPrimitive {
  int id{0};
  double duration{1.0};  // integer multiple of kDt
  double accel{0.0};     // m/s^2
  double steer_rate{0.0};  // rad/s
};

struct CostFunction {
  double w_time{1.0};
  double w_lateral{0.2};
  double w_steer{0.1};
};

enum class PlannerAlgo { AStar, GreedyBFS };

enum class PlanStatus { Success, NoTrajectory };

struct PlanResult {
  PlanStatus status{PlanStatus::NoTrajectory};
  std::optional<Trajectory> trajectory;
  int expanded_nodes{0};
  double cost{0.0};
};

struct PlanOptions {
  double horizon_s{8.0};
  int max_expansions{20000};
  double goal_heading_tol{deg2rad(15.0)};
  // Lateral road band (min y, max y at lane frame); unset = unconstrained.
  std::optional<std::pair<double, double>> road_band;
};

/// Integrates one primitive with forward Euler at kDt. Returns the state
/// sequence after each step (duration/kDt entries).
inline std::vector<VehicleState> simulate_primitive(
    const VehicleState& start, const MotionPrimitive& prim,
    const DynamicsLimits& limits, double dt = kDt) {
  const int steps = static_cast<int>(std::lround(prim.duration / dt));
  std::vector<VehicleState> out;
  out.reserve(steps);
  VehicleState s = start;
  for (int i = 0; i < steps; ++i) {
    s.p.x += s.v * std::cos(s.phi) * dt;
    s.p.y += s.v * std::sin(s.phi) * dt;
    s.phi = normalize_angle(s.phi + s.v / kWheelbase * std::tan(s.omega) * dt);
    s.omega = std::clamp(s.omega + prim.steer_rate * dt, -limits.omega_max,
                         limits.omega_max);
    s.v += prim.accel * dt;
    out.push_back(s);
  }
  return out;
}

/// Cross-product of acceleration levels {-a_max, 0, +a_max/2} and steering
/// rates {-w, -w/2, 0, +w/2, +w}, duration 1 s. Primitives whose end speed
/// would leave [0, speed_max] from the context's initial speed are
/// discarded; the same bound is re-checked per state during search.
inline std::vector<MotionPrimitive> generate_primitives(
    const PlanningContext& ctx) {
  const double a = ctx.dynamics.a_max;
  const double w = ctx.dynamics.omega_rate_max;
  const double accels[3] = {-a, 0.0, a * 0.5};
  const double steers[5] = {-w, -w * 0.5, 0.0, w * 0.5, w};
  const double v0 = ctx.initial_state.v;
  const double speed_max = ctx.speed_range.second;
  std::vector<MotionPrimitive> prims;
  int id = 0;
  for (double accel : accels) {
    for (double steer : steers) {
      MotionPrimitive p{id++, 1.0, accel, steer};
      const double end_v = v0 + accel * p.duration;
      if (end_v < -1e-12 || end_v > speed_max + 1e-12) continue;
      prims.push_back(p);
    }
  }
  return prims;
}

namespace detail {

struct SearchNode {
  VehicleState state;
  int time_steps{0};  // elapsed kDt steps
  double g{0.0};
  double h{0.0};
  int parent{-1};
  int prim_id{-1};
  int prim_steps{0};  // dt steps of the arriving primitive actually executed
};

// Obstacle occupancy cached per time index, with a bounding radius for a
// cheap pre-reject before the full SAT test.
struct ObstacleTimeline {
  std::vector<OrientedRect> rects;  // [time][obj] flattened
  std::vector<double> radius;      // per object
  int n_objects{0};

  const OrientedRect& at(int t, int k) const { return rects[t * n_objects + k]; }
};

inline ObstacleTimeline build_timeline(
    const std::vector<ClassifiedObject>& objects, int max_steps) {
  ObstacleTimeline tl;
  tl.n_objects = static_cast<int>(objects.size());
  tl.rects.reserve(static_cast<size_t>(max_steps + 1) * objects.size());
  for (int t = 0; t <= max_steps; ++t) {
    for (const auto& obj : objects) {
      tl.rects.push_back(predict_occupancy(obj, t * kDt));
    }
  }
  for (const auto& obj : objects) {
    tl.radius.push_back(obj.box.footprint().half_dims.norm());
  }
  return tl;
}

inline bool state_in_collision(const VehicleState& s,
                               const ObstacleTimeline& tl, int time_index) {
  const OrientedRect ego = ego_footprint(s);
  const double ego_radius = ego.half_dims.norm();
  for (int k = 0; k < tl.n_objects; ++k) {
    const OrientedRect& rect = tl.at(time_index, k);
    if ((rect.center - s.p).norm() > ego_radius + tl.radius[k] + 1e-9) continue;
    if (obb_intersect(ego, rect)) return true;
  }
  return false;
}

}  // namespace detail

/// Best-first search (A* or greedy) over primitive sequences. A node is a
/// (state, time index); successors are collision-free primitive
/// applications checked at every dt along the primitive. Deterministic:
/// ties break on (lower heuristic, smaller primitive id, insertion order).
inline PlanResult plan(const std::vector<ClassifiedObject>& objects,
                       const PlanningContext& ctx, const GoalRegion& goal,
                       const CostFunction& cost = {},
                       PlannerAlgo algo = PlannerAlgo::AStar,
                       const PlanOptions& opts = {}) {
  const double speed_max = ctx.speed_range.second;
  const int horizon_steps =
      static_cast<int>(std::lround(opts.horizon_s / kDt));
  const std::vector<MotionPrimitive> prims = generate_primitives(ctx);
  const detail::ObstacleTimeline timeline =
      detail::build_timeline(objects, horizon_steps);

  const Vec2 lane_dir = Vec2{1.0, 0.0}.rotated(goal.heading);
  const Vec2 lane_normal = Vec2{0.0, 1.0}.rotated(goal.heading);
  auto lateral_offset = [&](const Vec2& p) {
    return std::abs((p - goal.center).dot(lane_normal));
  };
  auto longitudinal = [&](const Vec2& p) {
    return (p - goal.center).dot(lane_dir);
  };
  // Distance to the goal rectangle itself (zero inside); dividing by the
  // speed cap keeps the heuristic an admissible lower bound on remaining
  // time cost.
  auto region_distance = [&](const Vec2& p) {
    const Vec2 d = (p - goal.center).rotated(-goal.heading);
    const double dx = std::max(0.0, std::abs(d.x) - goal.half_extent.x);
    const double dy = std::max(0.0, std::abs(d.y) - goal.half_extent.y);
    return std::hypot(dx, dy);
  };
  auto heuristic = [&](const VehicleState& s) {
    return cost.w_time * region_distance(s.p) / speed_max;
  };
  auto is_goal = [&](const VehicleState& s) {
    return goal.contains(s.p) &&
           std::abs(normalize_angle(s.phi - goal.heading)) <=
               opts.goal_heading_tol + 1e-12;
  };

  std::vector<detail::SearchNode> nodes;
  nodes.push_back({ctx.initial_state, 0, 0.0, heuristic(ctx.initial_state),
                   -1, -1});

  // Priority key: (primary, heuristic, prim id, insertion seq).
  using Key = std::tuple<double, double, int, std::int64_t>;
  struct Entry {
    Key key;
    int node;
  };
  auto cmp = [](const Entry& a, const Entry& b) { return a.key > b.key; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> open(cmp);
  auto push = [&](int idx) {
    const auto& n = nodes[idx];
    const double primary =
        algo == PlannerAlgo::AStar ? n.g + n.h : n.h;
    open.push({Key{primary, n.h, n.prim_id, idx}, idx});
  };
  push(0);

  PlanResult result;
  int expansions = 0;
  int goal_node = -1;

  while (!open.empty()) {
    const int cur = open.top().node;
    open.pop();
    const detail::SearchNode node = nodes[cur];
    if (is_goal(node.state) && cur != 0) {
      goal_node = cur;
      result.cost = node.g;
      break;
    }
    if (++expansions > opts.max_expansions) break;
    if (node.time_steps >= horizon_steps) continue;

    for (const MotionPrimitive& prim : prims) {
      const int prim_steps =
          static_cast<int>(std::lround(prim.duration / kDt));
      if (node.time_steps + prim_steps > horizon_steps) continue;
      const double end_v = node.state.v + prim.accel * prim.duration;
      if (end_v < -1e-12 || end_v > speed_max + 1e-12) continue;

      const std::vector<VehicleState> path =
          simulate_primitive(node.state, prim, ctx.dynamics);
      bool feasible = true;
      bool reached = false;
      int used_steps = prim_steps;
      for (int i = 0; i < prim_steps; ++i) {
        if (detail::state_in_collision(path[i], timeline,
                                       node.time_steps + i + 1)) {
          feasible = false;
          break;
        }
        if (opts.road_band &&
            (path[i].p.y < opts.road_band->first - 0.5 ||
             path[i].p.y > opts.road_band->second + 0.5)) {
          feasible = false;
          break;
        }
        // Goal states need not fall on primitive boundaries (a 15 m goal
        // at 12 m/s is reached after 1.25 s); truncate at the first dt
        // state that satisfies the goal test.
        if (is_goal(path[i])) {
          reached = true;
          used_steps = i + 1;
          break;
        }
      }
      if (!feasible) continue;

      const VehicleState& end = path[used_steps - 1];
      const int end_steps = node.time_steps + used_steps;
      if (!reached) {
        // Overshot goals cannot be re-entered without reversing.
        if (longitudinal(end.p) > goal.half_extent.x + 2.0) continue;
        // Remaining-time feasibility bound.
        if (end_steps * kDt + region_distance(end.p) / speed_max >
            opts.horizon_s + 1e-9) {
          continue;
        }
      }

      detail::SearchNode next;
      next.state = end;
      next.time_steps = end_steps;
      const double executed = used_steps * kDt;
      next.g = node.g + cost.w_time * executed +
               cost.w_lateral * lateral_offset(end.p) +
               cost.w_steer * std::abs(prim.steer_rate) *
                   (executed / prim.duration);
      next.h = heuristic(end);
      next.parent = cur;
      next.prim_id = prim.id;
      next.prim_steps = used_steps;
      nodes.push_back(next);
      push(static_cast<int>(nodes.size()) - 1);
    }
  }

  result.expanded_nodes = expansions;
  if (goal_node < 0) return result;

  // Reconstruct the (primitive, executed steps) sequence, then re-simulate
  // to a dt trajectory, truncating the final primitive where the goal test
  // first held.
  std::vector<std::pair<int, int>> prim_seq;
  for (int idx = goal_node; nodes[idx].parent >= 0; idx = nodes[idx].parent) {
    prim_seq.emplace_back(nodes[idx].prim_id, nodes[idx].prim_steps);
  }
  std::reverse(prim_seq.begin(), prim_seq.end());

  Trajectory traj;
  traj.dt = kDt;
  traj.states.push_back(ctx.initial_state);
  VehicleState s = ctx.initial_state;
  for (const auto& [pid, steps] : prim_seq) {
    const auto it = std::find_if(prims.begin(), prims.end(),
                                 [pid](const auto& p) { return p.id == pid; });
    const auto path = simulate_primitive(s, *it, ctx.dynamics);
    traj.states.insert(traj.states.end(), path.begin(),
                       path.begin() + steps);
    s = path[steps - 1];
  }
  result.status = PlanStatus::Success;
  result.trajectory = std::move(traj);
  return result;
}

}  // namespace roadsafe

#endif  // ROADSAFE_PLANNER_HPP_
