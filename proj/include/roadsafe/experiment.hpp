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

#ifndef ROADSAFE_EXPERIMENT_HPP_
#define ROADSAFE_EXPERIMENT_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "roadsafe/attacks.hpp"
#include "roadsafe/collision.hpp"
#include "roadsafe/ingest.hpp"
#include "roadsafe/metrics.hpp"
#include "roadsafe/perception.hpp"
#include "roadsafe/planner.hpp"
#include "roadsafe/report.hpp"
#include "roadsafe/rng.hpp"
#include "roadsafe/surrogate.hpp"
#include "roadsafe/types.hpp"

namespace roadsafe {

// ---------------------------------------------------------------------------
// Attack sweep settings
// ---------------------------------------------------------------------------

struct AttackNone {};

struct AttackPgd {
  PerturbationConfig cfg;
};

struct AttackPatch {
  int radius{16};
  PlacementPolicy placement{PlacementPolicy::RandomWholeImage};
};

/// Effect-level stand-in for the perturbation attack: `level` roadside
/// ghost pairs plus box drift, monotone in the attack intensity.
/// level n in 0..4 maps to lambda_ghost = 2n and drift sigma = 0.05n m.
struct AttackEffectPerturb {
  int level{0};

  double ghost_rate() const { return 2.0 * level; }
  double drift_sigma() const { return 0.05 * level; }
};

struct AttackEffectPatch {
  GhostPlacement placement{GhostPlacement::Random};
};

using AttackSetting = std::variant<AttackNone, AttackPgd, AttackPatch,
                                   AttackEffectPerturb, AttackEffectPatch>;

inline std::string setting_name(const AttackSetting& setting) {
  struct Visitor {
    std::string operator()(const AttackNone&) const { return "none"; }
    std::string operator()(const AttackPgd& a) const {
      return "pgd-a" + ingest_detail::format_number(a.cfg.alpha) + "-n" +
             std::to_string(a.cfg.n_iters);
    }
    std::string operator()(const AttackPatch& a) const {
      return a.placement == PlacementPolicy::RandomWholeImage
                 ? "patch-random"
                 : "patch-specific";
    }
    std::string operator()(const AttackEffectPerturb& a) const {
      return "effect-perturb-" + std::to_string(a.level);
    }
    std::string operator()(const AttackEffectPatch& a) const {
      return a.placement == GhostPlacement::Random ? "effect-patch-random"
                                                   : "effect-patch-specific";
    }
  };
  return std::visit(Visitor{}, setting);
}

enum class DetectorMode { GroundTruthPassthrough, Surrogate };

struct ExperimentConfig {
  std::uint64_t seed{0};
  int n_scenarios{600};
  double road_mix{0.5};  // fraction of Street scenarios
  std::vector<Intention> intentions{Intention::Left, Intention::Straight,
                                    Intention::Right};
  std::vector<AttackSetting> attacks{AttackNone{}};
  DetectorMode detector{DetectorMode::GroundTruthPassthrough};
  std::string theta_path;  // for DetectorMode::Surrogate
  PlannerAlgo algo{PlannerAlgo::AStar};
  std::string out_dir{"out"};
  int jobs{1};
  bool verbose{false};
};

// ---------------------------------------------------------------------------
// Synthetic scenario suite
// ---------------------------------------------------------------------------

inline constexpr double kLaneWidth = 3.5;

/// Generates n validated scenarios: 2-3 parallel lanes, ego in a lane,
/// 0-6 objects placed collision-free, about 40% moving with lane-aligned
/// velocities, plus prior frames for the motion classifier. Deterministic
/// per seed.
inline std::vector<Scenario> generate_suite(std::uint64_t seed, int n,
                                            double road_mix = 0.5) {
  std::vector<Scenario> suite;
  suite.reserve(n);
  for (int idx = 0; idx < n; ++idx) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(idx)));
    Scenario s;
    s.id = "syn-" + std::to_string(idx);
    s.road_type = rng.uniform() < road_mix ? RoadType::Street
                                           : RoadType::Highway;
    const auto range = road_speed_range(s.road_type);

    const int n_lanes = rng.uniform() < 0.3 ? 2 : 3;
    for (int lane = 0; lane < n_lanes; ++lane) {
      const double y = (lane - (n_lanes - 1) * 0.5) * kLaneWidth;
      s.lanes.push_back({{{-10.0, y}, {60.0, y}}, kLaneWidth});
    }
    const int ego_lane = n_lanes == 3 ? 1 : static_cast<int>(rng.uniform_int(2));
    const double ego_y = s.lanes[ego_lane].centerline.front().y;

    s.ego_context.road_type = s.road_type;
    s.ego_context.speed_range = range;
    s.ego_context.initial_state = {{0.0, ego_y},
                                   rng.uniform(range.first, range.second),
                                   0.0,
                                   0.0};

    const OrientedRect ego_rect =
        ego_footprint(s.ego_context.initial_state);
    const int n_objects = static_cast<int>(rng.uniform_int(7));
    for (int k = 0; k < n_objects; ++k) {
      for (int attempt = 0; attempt < 20; ++attempt) {
        ScenarioObject obj;
        const int lane = static_cast<int>(rng.uniform_int(n_lanes));
        obj.box.center.x = rng.uniform(8.0, 38.0);
        obj.box.center.y = s.lanes[lane].centerline.front().y +
                           rng.uniform(-0.4, 0.4);
        obj.box.dims = {rng.uniform(3.8, 4.6), rng.uniform(1.6, 1.8),
                        rng.uniform(1.4, 1.6)};
        obj.box.center.z = obj.box.dims.z * 0.5;
        obj.box.yaw = rng.uniform(-0.05, 0.05);
        obj.is_moving = rng.uniform() < 0.4;
        if (obj.is_moving) {
          obj.velocity = {rng.uniform(range.first, range.second), 0.0};
        }
        OrientedRect rect = obj.box.footprint();
        rect.half_dims = rect.half_dims + Vec2{1.0, 0.3};  // spacing margin
        bool clear = !obb_intersect(rect, ego_rect);
        for (const ScenarioObject& other : s.objects) {
          if (obb_intersect(rect, other.box.footprint())) clear = false;
        }
        if (!clear) continue;
        s.objects.push_back(obj);
        break;
      }
    }

    // Two prior frames consistent with the constant-velocity motion.
    for (double t : {-0.5, -0.25}) {
      FrameObservation frame;
      frame.t = t;
      for (const ScenarioObject& obj : s.objects) {
        frame.positions.push_back(obj.box.center.xy() + obj.velocity * t);
      }
      s.frames.push_back(std::move(frame));
    }
    suite.push_back(std::move(s));
  }
  return suite;
}

/// Goal region 15 m ahead in the lane selected by the intention, or
/// nullopt when that adjacent lane does not exist.
inline std::optional<GoalRegion> build_goal_region(const Scenario& s,
                                                   Intention intention) {
  const int lane_idx = attack_detail::intention_lane_index(s, intention);
  if (lane_idx < 0) return std::nullopt;
  if (intention != Intention::Straight &&
      lane_idx == attack_detail::ego_lane_index(s)) {
    return std::nullopt;  // no adjacent lane on that side
  }
  const Lane& lane = s.lanes[lane_idx];
  const double ego_x = s.ego_context.initial_state.p.x;
  GoalRegion goal;
  goal.intention = intention;
  goal.center = {ego_x + kGoalDistance,
                 attack_detail::lane_y_at(lane, ego_x + kGoalDistance)};
  goal.half_extent = {2.0, lane.width * 0.5};
  goal.heading = 0.0;  // parallel straight lanes
  return goal;
}

// ---------------------------------------------------------------------------
// End-to-end evaluation
// ---------------------------------------------------------------------------

namespace experiment_detail {

struct CellResult {
  ScenarioOutcome outcome;
  std::vector<DetectedBox3D> detections;  // post-attack, for AP
  std::vector<DetectedBox3D> ground_truth;
};

inline std::vector<ClassifiedObject> ground_truth_objects(const Scenario& s) {
  std::vector<ClassifiedObject> objects;
  objects.reserve(s.objects.size());
  for (const ScenarioObject& o : s.objects) {
    objects.push_back({o.box, o.is_moving, o.velocity});
  }
  return objects;
}

inline std::pair<double, double> road_band(const Scenario& s) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Lane& lane : s.lanes) {
    for (const Vec2& p : lane.centerline) {
      lo = std::min(lo, p.y - lane.width * 0.5);
      hi = std::max(hi, p.y + lane.width * 0.5);
    }
  }
  return {lo, hi};
}

/// Evaluates one (scenario, intention, attack setting) cell. Planning
/// consumes the (possibly attacked) detections; collision checking always
/// uses the ground-truth objects — that asymmetry is how wrong detections
/// translate into unsafe plans.
inline CellResult evaluate_cell(const Scenario& scenario, Intention intention,
                                const AttackSetting& setting,
                                const ExperimentConfig& cfg,
                                const DetectorSurrogate* surrogate,
                                const Patch* trained_patch,
                                std::uint64_t cell_seed) {
  CellResult result;
  result.outcome.scenario_id = scenario.id;
  result.outcome.intention = intention;
  for (const ScenarioObject& o : scenario.objects) {
    result.ground_truth.push_back(o.box);
  }

  try {
    const std::optional<GoalRegion> goal =
        build_goal_region(scenario, intention);
    // Detections the planner will trust.
    std::vector<DetectedBox3D> detections;
    if (surrogate != nullptr) {
      StereoImagePair img = render_scene(surrogate->grid, result.ground_truth);
      if (const auto* pgd = std::get_if<AttackPgd>(&setting)) {
        img = pgd_perturb(*surrogate, img, result.ground_truth, pgd->cfg)
                  .image;
      } else if (const auto* pat = std::get_if<AttackPatch>(&setting);
                 pat != nullptr && trained_patch != nullptr) {
        Rng rng(mix_seed(cell_seed, hash_string("patch-place")));
        const PatchSpec spec = sample_patch_spec(
            surrogate->grid, *trained_patch, pat->placement,
            pat->placement == PlacementPolicy::RegionForIntention
                ? std::optional<Intention>(intention)
                : std::nullopt,
            rng);
        img = apply_patch(img, spec);
      }
      detections = detect(*surrogate, img);
    } else {
      detections = result.ground_truth;  // passthrough, score = 1
    }

    std::vector<ClassifiedObject> classified =
        classify_motion(detections, scenario.frames);

    if (const auto* eff = std::get_if<AttackEffectPerturb>(&setting)) {
      EffectModel ghosts{EffectKind::RoadsideGhosts, eff->ghost_rate(),
                         GhostPlacement::Random, std::nullopt,
                         mix_seed(cell_seed, 1)};
      classified = inject_effect(classified, scenario, ghosts);
      EffectModel drift{EffectKind::BoxDrift, eff->drift_sigma(),
                        GhostPlacement::Random, std::nullopt,
                        mix_seed(cell_seed, 2)};
      classified = inject_effect(classified, scenario, drift);
    } else if (const auto* pat = std::get_if<AttackEffectPatch>(&setting)) {
      EffectModel ghost{EffectKind::OnRoadPatchGhost, 1.0, pat->placement,
                        pat->placement == GhostPlacement::Specific
                            ? std::optional<Intention>(intention)
                            : std::nullopt,
                        mix_seed(cell_seed, 3)};
      classified = inject_effect(classified, scenario, ghost);
    }

    result.detections.clear();
    for (const ClassifiedObject& obj : classified) {
      result.detections.push_back(obj.box);
    }

    if (!goal) return result;  // no adjacent lane: planning failure

    const PlanningContext ctx = select_constraints(scenario, cfg.seed);
    CostFunction cost;
    PlanOptions opts;
    opts.road_band = road_band(scenario);
    const PlanResult plan_result =
        plan(classified, ctx, *goal, cost, cfg.algo, opts);
    if (plan_result.status != PlanStatus::Success) return result;

    result.outcome.planned = true;
    const CollisionResult collision = check_trajectory(
        *plan_result.trajectory, ground_truth_objects(scenario));
    result.outcome.collided = collision.collided;
  } catch (const std::exception&) {
    // A crashed pipeline counts as a planning failure, never aborts the
    // sweep.
    result.outcome.planned = false;
    result.outcome.collided = false;
  }
  return result;
}

}  // namespace experiment_detail

struct ExperimentResult {
  MetricsReport report;
  std::string csv;
  std::string manifest_json;
};

/// Runs the full sweep: every scenario x intention x attack setting cell,
/// deterministic under a fixed seed regardless of the parallelism degree.
inline ExperimentResult run_experiment(
    const ExperimentConfig& cfg, const std::vector<Scenario>& scenarios) {
  namespace ed = experiment_detail;

  bool wants_surrogate = cfg.detector == DetectorMode::Surrogate;
  for (const AttackSetting& a : cfg.attacks) {
    // Image-space attacks only exist against the image-consuming detector.
    if (std::holds_alternative<AttackPgd>(a) ||
        std::holds_alternative<AttackPatch>(a)) {
      wants_surrogate = true;
    }
  }
  DetectorSurrogate surrogate;
  bool have_surrogate = false;
  if (wants_surrogate) {
    surrogate = cfg.theta_path.empty() ? fit_surrogate(GridSpec{}, cfg.seed)
                                       : load_theta(cfg.theta_path);
    have_surrogate = true;
  }

  // Train each image-space patch once, up front, on a small rendered set.
  std::vector<std::optional<Patch>> patches(cfg.attacks.size());
  for (size_t a = 0; a < cfg.attacks.size(); ++a) {
    const auto* pat = std::get_if<AttackPatch>(&cfg.attacks[a]);
    if (pat == nullptr) continue;
    std::vector<std::pair<StereoImagePair, std::vector<DetectedBox3D>>> set;
    for (const Scenario& s : generate_suite(mix_seed(cfg.seed, 77), 10)) {
      std::vector<DetectedBox3D> boxes;
      for (const ScenarioObject& o : s.objects) boxes.push_back(o.box);
      set.emplace_back(render_scene(surrogate.grid, boxes), boxes);
    }
    PatchTrainingConfig tc;
    DetectedBox3D target;
    target.center = {12.0, 0.0, 0.75};
    target.dims = kGhostDims;
    tc.target_boxes = {target};
    tc.radius = pat->radius;
    tc.placement_policy = pat->placement;
    tc.seed = cfg.seed;
    patches[a] = train_patch(surrogate, set, tc).patch;
  }

  struct Cell {
    int setting_idx;
    int intention_idx;
    int scenario_idx;
  };
  std::vector<Cell> cells;
  for (int a = 0; a < static_cast<int>(cfg.attacks.size()); ++a) {
    for (int i = 0; i < static_cast<int>(cfg.intentions.size()); ++i) {
      for (int s = 0; s < static_cast<int>(scenarios.size()); ++s) {
        cells.push_back({a, i, s});
      }
    }
  }

  std::vector<ed::CellResult> results(cells.size());
  auto run_cell = [&](size_t k) {
    const Cell& cell = cells[k];
    const AttackSetting& setting = cfg.attacks[cell.setting_idx];
    const Intention intention = cfg.intentions[cell.intention_idx];
    const Scenario& scenario = scenarios[cell.scenario_idx];
    // Per-cell seed from (experiment seed, setting, scenario, intention
    // for intention-aware placement) so evaluation order cannot matter.
    std::uint64_t cell_seed = mix_seed(cfg.seed, hash_string(scenario.id));
    cell_seed = mix_seed(cell_seed, static_cast<std::uint64_t>(cell.setting_idx));
    if (std::holds_alternative<AttackEffectPatch>(setting) &&
        std::get<AttackEffectPatch>(setting).placement ==
            GhostPlacement::Specific) {
      cell_seed = mix_seed(cell_seed,
                           static_cast<std::uint64_t>(cell.intention_idx));
    }
    const std::optional<Patch>& patch = patches[cell.setting_idx];
    results[k] = ed::evaluate_cell(scenario, intention, setting, cfg,
                                   have_surrogate ? &surrogate : nullptr,
                                   patch ? &*patch : nullptr, cell_seed);
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (size_t k = 0; k < cells.size(); ++k) run_cell(k);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> workers;
    for (int t = 0; t < jobs; ++t) {
      workers.emplace_back([&]() {
        for (size_t k = next.fetch_add(1); k < cells.size();
             k = next.fetch_add(1)) {
          run_cell(k);
        }
      });
    }
    for (std::thread& w : workers) w.join();
  }

  // Merge in fixed (intention, setting) order.
  ExperimentResult out;
  for (int i = 0; i < static_cast<int>(cfg.intentions.size()); ++i) {
    for (int a = 0; a < static_cast<int>(cfg.attacks.size()); ++a) {
      std::vector<ScenarioOutcome> outcomes;
      std::vector<DetectedBox3D> dets, gts;
      for (size_t k = 0; k < cells.size(); ++k) {
        if (cells[k].setting_idx != a || cells[k].intention_idx != i) continue;
        outcomes.push_back(results[k].outcome);
        dets.insert(dets.end(), results[k].detections.begin(),
                    results[k].detections.end());
        gts.insert(gts.end(), results[k].ground_truth.begin(),
                   results[k].ground_truth.end());
      }
      ReportRow row;
      row.intention = cfg.intentions[i];
      row.setting = setting_name(cfg.attacks[a]);
      row.rates = safety_metrics(outcomes);
      row.ap_easy = average_precision(dets, gts, 0.7, Difficulty::Easy);
      row.ap_moderate =
          average_precision(dets, gts, 0.7, Difficulty::Moderate);
      row.ap_hard = average_precision(dets, gts, 0.7, Difficulty::Hard);
      out.report.add_row(std::move(row));
    }
  }

  out.csv = report_to_csv(out.report);

  // Run manifest: seed, config hash, artifact hashes.
  std::string config_desc = "seed=" + std::to_string(cfg.seed) +
                            ";n=" + std::to_string(cfg.n_scenarios) +
                            ";mix=" + ingest_detail::format_number(cfg.road_mix) +
                            ";algo=" +
                            (cfg.algo == PlannerAlgo::AStar ? "astar" : "gbfs");
  for (const AttackSetting& a : cfg.attacks) {
    config_desc += ";" + setting_name(a);
  }
  nlohmann::json manifest;
  manifest["seed"] = cfg.seed;
  manifest["config_hash"] = hash_string(config_desc);
  manifest["version"] = "roadsafe-1.0";
  manifest["n_scenarios"] = cfg.n_scenarios;
  if (have_surrogate) {
    std::string blob(reinterpret_cast<const char*>(surrogate.theta.data()),
                     surrogate.theta.size() * sizeof(double));
    manifest["theta_hash"] = hash_string(blob);
  }
  out.manifest_json = manifest.dump(2) + "\n";
  return out;
}

/// Convenience wrapper: generates the synthetic suite, runs the sweep, and
/// writes report.csv plus manifest.json into cfg.out_dir.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const std::vector<Scenario> suite =
      generate_suite(cfg.seed, cfg.n_scenarios, cfg.road_mix);
  ExperimentResult result = run_experiment(cfg, suite);
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_report(result.report, cfg.out_dir + "/report.csv");
    std::ofstream manifest(cfg.out_dir + "/manifest.json", std::ios::binary);
    manifest << result.manifest_json;
  }
  return result;
}

}  // namespace roadsafe

#endif  // ROADSAFE_EXPERIMENT_HPP_
