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

#ifndef ROADSAFE_ATTACKS_HPP_
#define ROADSAFE_ATTACKS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "roadsafe/geom.hpp"
#include "roadsafe/rng.hpp"
#include "roadsafe/surrogate.hpp"
#include "roadsafe/types.hpp"

namespace roadsafe {

// ---------------------------------------------------------------------------
// Perturbation (PGD) attack
// ---------------------------------------------------------------------------

struct PerturbationConfig {
  double epsilon{1.0};  // per-step clip bound, pixel units
  double alpha{0.4};    // step intensity
  int n_iters{1};

  bool valid() const { return epsilon > 0.0 && alpha > 0.0 && n_iters >= 0; }
};

struct PgdResult {
  StereoImagePair image;
  std::vector<double> loss_curve;  // loss at each iterate, n_iters + 1 values
  std::vector<double> step_max_delta;  // per-iteration max |delta|
};

namespace attack_detail {

inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

inline void clamp_pixels(std::vector<double>& plane) {
  for (double& v : plane) v = std::clamp(v, 0.0, 255.0);
}

}  // namespace attack_detail

/// Iterated clipped sign-gradient ascent on the detection loss. Each
/// iteration applies delta = Clip_eps{alpha * sign(grad)} additively to
/// both images; the gradient is taken at the current perturbed images.
/// Final pixels are clamped to [0, 255].
inline PgdResult pgd_perturb(const DetectorSurrogate& d,
                             const StereoImagePair& img,
                             const std::vector<DetectedBox3D>& labels,
                             const PerturbationConfig& cfg) {
  if (!cfg.valid()) throw std::invalid_argument("invalid PerturbationConfig");
  PgdResult result;
  result.image = img;
  for (int n = 0; n < cfg.n_iters; ++n) {
    const DetectionLoss loss = loss_and_gradient(d, result.image, labels);
    result.loss_curve.push_back(loss.value);
    double max_delta = 0.0;
    auto step = [&](std::vector<double>& plane,
                    const std::vector<double>& grad) {
      for (size_t k = 0; k < plane.size(); ++k) {
        const double delta = std::clamp(cfg.alpha * attack_detail::sign(grad[k]),
                                        -cfg.epsilon, cfg.epsilon);
        max_delta = std::max(max_delta, std::abs(delta));
        plane[k] += delta;
      }
    };
    step(result.image.left, loss.gradient.left);
    step(result.image.right, loss.gradient.right);
    result.step_max_delta.push_back(max_delta);
  }
  result.loss_curve.push_back(
      loss_and_gradient(d, result.image, labels).value);
  attack_detail::clamp_pixels(result.image.left);
  attack_detail::clamp_pixels(result.image.right);
  return result;
}

// ---------------------------------------------------------------------------
// Patch attack
// ---------------------------------------------------------------------------

class PatchOutOfBounds : public std::runtime_error {
 public:
  explicit PatchOutOfBounds(const std::string& what)
      : std::runtime_error("patch out of bounds: " + what) {}
};

/// Disc-shaped pixel patch stored in its (2r+1)^2 bounding square.
struct Patch {
  int radius{16};  // px
  std::vector<double> pixels;  // (2r+1)^2 * 3, row-major

  static constexpr int kMaxRadius = 38;

  explicit Patch(int r = 16, double fill = 128.0)
      : radius(r),
        pixels(static_cast<size_t>(2 * r + 1) * (2 * r + 1) * 3, fill) {}

  int side() const { return 2 * radius + 1; }
  size_t index(int r, int c, int ch) const {
    return (static_cast<size_t>(r) * side() + c) * 3 + ch;
  }
};

struct PixLoc {
  int x{0};  // column
  int y{0};  // row
};

struct PatchSpec {
  Patch patch;
  PixLoc loc_l;  // top-left of the bounding square in the left image
  PixLoc loc_r;  // top-left in the right image (same row)
  double rotation{0.0};  // tau, radians

  int disparity() const { return loc_l.x - loc_r.x; }
};

inline constexpr int kPatchDisparityMin = 5;
inline constexpr int kPatchDisparityMax = 40;
inline constexpr double kPatchMaxRotation = deg2rad(10.0);

namespace attack_detail {

inline void validate_patch_spec(const PatchSpec& spec, int rows, int cols) {
  const int side = spec.patch.side();
  if (spec.patch.radius > Patch::kMaxRadius) {
    throw PatchOutOfBounds("radius " + std::to_string(spec.patch.radius) +
                           " exceeds " + std::to_string(Patch::kMaxRadius));
  }
  const int lambda = spec.disparity();
  if (lambda < 0 || lambda > kPatchDisparityMax) {
    throw PatchOutOfBounds("disparity " + std::to_string(lambda));
  }
  if (spec.loc_l.y != spec.loc_r.y) {
    throw PatchOutOfBounds("left/right rows differ");
  }
  if (std::abs(spec.rotation) > kPatchMaxRotation + 1e-12) {
    throw PatchOutOfBounds("rotation beyond +-10 degrees");
  }
  for (const PixLoc& loc : {spec.loc_l, spec.loc_r}) {
    if (loc.x < 0 || loc.y < 0 || loc.x + side > cols || loc.y + side > rows) {
      throw PatchOutOfBounds("placement leaves the image");
    }
  }
}

// Visits every target pixel the rotated disc paints; fn(tr, tc, pr, pc)
// receives target row/col and the nearest source patch row/col.
template <typename Fn>
inline void for_each_patch_pixel(const Patch& patch, double rotation, Fn&& fn) {
  const int side = patch.side();
  const double r2 =
      static_cast<double>(patch.radius) * patch.radius + 0.25;
  const double c = std::cos(-rotation), s = std::sin(-rotation);
  for (int tr = 0; tr < side; ++tr) {
    for (int tc = 0; tc < side; ++tc) {
      // Inverse-rotate the target offset to find the source pixel.
      const double dy = tr - patch.radius, dx = tc - patch.radius;
      const double sx = c * dx - s * dy;
      const double sy = s * dx + c * dy;
      if (sx * sx + sy * sy > r2) continue;
      const int pr = static_cast<int>(std::lround(sy)) + patch.radius;
      const int pc = static_cast<int>(std::lround(sx)) + patch.radius;
      if (pr < 0 || pr >= side || pc < 0 || pc >= side) continue;
      fn(tr, tc, pr, pc);
    }
  }
}

}  // namespace attack_detail

/// Pastes the rotated patch at loc_l in the left image and loc_r in the
/// right image (disparity-consistent); pixels outside the disc are
/// untouched.
inline StereoImagePair apply_patch(const StereoImagePair& img,
                                   const PatchSpec& spec) {
  attack_detail::validate_patch_spec(spec, img.rows, img.cols);
  StereoImagePair out = img;
  auto paste = [&](std::vector<double>& plane, const PixLoc& loc) {
    attack_detail::for_each_patch_pixel(
        spec.patch, spec.rotation, [&](int tr, int tc, int pr, int pc) {
          for (int ch = 0; ch < 3; ++ch) {
            plane[out.index(loc.y + tr, loc.x + tc, ch)] =
                spec.patch.pixels[spec.patch.index(pr, pc, ch)];
          }
        });
  };
  paste(out.left, spec.loc_l);
  paste(out.right, spec.loc_r);
  return out;
}

enum class PlacementPolicy { RandomWholeImage, RegionForIntention };

struct PatchTrainingConfig {
  std::vector<DetectedBox3D> target_boxes;  // b*
  int radius{16};
  int epochs{100};
  double step_size{15000.0};
  PlacementPolicy placement_policy{PlacementPolicy::RandomWholeImage};
  std::optional<Intention> intention;  // for RegionForIntention
  std::uint64_t seed{0};

  bool valid() const { return epochs >= 1 && step_size >= 0.0; }
};

struct PatchTrainResult {
  Patch patch;
  std::vector<double> objective_curve;  // epochs + 1 entries
};

namespace attack_detail {

// Column band a BEV lateral interval maps to.
inline std::pair<int, int> intention_column_band(const GridSpec& grid,
                                                 Intention intention) {
  auto col_of_y = [&grid](double y) {
    return static_cast<int>((grid.y_max() - y) / grid.m_per_px());
  };
  const double half_lane = 1.75;
  switch (intention) {
    case Intention::Left: return {0, col_of_y(half_lane)};
    case Intention::Straight:
      return {col_of_y(half_lane), col_of_y(-half_lane)};
    case Intention::Right: return {col_of_y(-half_lane), grid.cols()};
  }
  return {0, grid.cols()};
}

}  // namespace attack_detail

/// Samples a valid placement (location, disparity, rotation) for the patch,
/// optionally restricted to the image band matching a driving intention.
inline PatchSpec sample_patch_spec(const GridSpec& grid, const Patch& patch,
                                   PlacementPolicy policy,
                                   std::optional<Intention> intention,
                                   Rng& rng) {
  const int rows = grid.rows(), cols = grid.cols();
  const int side = patch.side();
  PatchSpec spec;
  spec.patch = patch;
  const int lambda_max = std::min(kPatchDisparityMax, cols - side);
  const int lambda =
      kPatchDisparityMin +
      static_cast<int>(rng.uniform_int(
          static_cast<std::uint64_t>(lambda_max - kPatchDisparityMin + 1)));
  int x_lo = lambda, x_hi = cols - side;
  if (policy == PlacementPolicy::RegionForIntention && intention) {
    const auto band = attack_detail::intention_column_band(grid, *intention);
    x_lo = std::max(x_lo, band.first);
    x_hi = std::min(x_hi, band.second - side);
  }
  x_hi = std::max(x_hi, x_lo);
  spec.loc_l.x = x_lo + static_cast<int>(rng.uniform_int(
                            static_cast<std::uint64_t>(x_hi - x_lo + 1)));
  spec.loc_l.y = static_cast<int>(
      rng.uniform_int(static_cast<std::uint64_t>(rows - side + 1)));
  spec.loc_r = {spec.loc_l.x - lambda, spec.loc_l.y};
  spec.rotation = rng.uniform(-kPatchMaxRotation, kPatchMaxRotation);
  return spec;
}

/// Trains the patch by gradient descent on the Monte-Carlo estimate of the
/// expected detection loss toward the target boxes, over sampled images,
/// placements, disparities, and rotations. Returns the patch with the
/// lowest running objective together with the training curve.
inline PatchTrainResult train_patch(
    const DetectorSurrogate& d,
    const std::vector<std::pair<StereoImagePair, std::vector<DetectedBox3D>>>&
        dataset,
    const PatchTrainingConfig& cfg) {
  if (dataset.empty()) throw std::invalid_argument("empty patch dataset");
  if (!cfg.valid()) throw std::invalid_argument("invalid PatchTrainingConfig");

  Patch patch(cfg.radius);
  Rng rng(mix_seed(cfg.seed, hash_string("train-patch")));

  auto sample_spec = [&]() {
    return sample_patch_spec(d.grid, patch, cfg.placement_policy,
                             cfg.intention, rng);
  };

  PatchTrainResult result;
  result.patch = patch;
  double best_objective = std::numeric_limits<double>::infinity();
  std::vector<double> patch_grad(patch.pixels.size());

  for (int epoch = 0; epoch <= cfg.epochs; ++epoch) {
    std::fill(patch_grad.begin(), patch_grad.end(), 0.0);
    double objective = 0.0;
    for (const auto& [image, labels] : dataset) {
      (void)labels;  // the optimization target is cfg.target_boxes
      PatchSpec spec = sample_spec();
      spec.patch = patch;
      const StereoImagePair patched = apply_patch(image, spec);
      const DetectionLoss loss =
          loss_and_gradient(d, patched, cfg.target_boxes);
      objective += loss.value;
      // Back-map pixel gradients onto the patch through the paste.
      attack_detail::for_each_patch_pixel(
          patch, spec.rotation, [&](int tr, int tc, int pr, int pc) {
            for (int ch = 0; ch < 3; ++ch) {
              patch_grad[patch.index(pr, pc, ch)] +=
                  loss.gradient.left[patched.index(spec.loc_l.y + tr,
                                                   spec.loc_l.x + tc, ch)] +
                  loss.gradient.right[patched.index(spec.loc_r.y + tr,
                                                    spec.loc_r.x + tc, ch)];
            }
          });
    }
    objective /= static_cast<double>(dataset.size());
    result.objective_curve.push_back(objective);
    if (objective < best_objective) {
      best_objective = objective;
      result.patch = patch;
    }
    if (epoch == cfg.epochs) break;
    for (size_t k = 0; k < patch.pixels.size(); ++k) {
      patch.pixels[k] = std::clamp(
          patch.pixels[k] - cfg.step_size * patch_grad[k] /
                                static_cast<double>(dataset.size()),
          0.0, 255.0);
    }
  }
  return result;
}

/// Writes the patch as a binary PPM (P6) plus a small JSON sidecar with
/// the training metadata.
inline void save_patch(const Patch& patch, const std::string& path,
                       std::uint64_t seed, int epochs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << "P6\n" << patch.side() << " " << patch.side() << "\n255\n";
  for (size_t k = 0; k < patch.pixels.size(); ++k) {
    const int v = static_cast<int>(std::lround(
        std::clamp(patch.pixels[k], 0.0, 255.0)));
    out.put(static_cast<char>(v));
  }
  std::ofstream meta(path + ".json");
  meta << "{\"radius\": " << patch.radius << ", \"seed\": " << seed
       << ", \"epochs\": " << epochs << "}\n";
}

// ---------------------------------------------------------------------------
// Effect-level corruption models
// ---------------------------------------------------------------------------

enum class EffectKind { RoadsideGhosts, OnRoadPatchGhost, BoxDrift };

enum class GhostPlacement { Random, Specific };

/// Detection-corruption model emulating the measured consequences of the
/// image-space attacks: roadside ghost boxes (perturbation-style), a
/// single on-road ghost (patch-style), or center/yaw drift of real boxes.
struct EffectModel {
  EffectKind kind{EffectKind::RoadsideGhosts};
  double intensity{0.0};  // expected ghost count, or drift sigma in meters
  GhostPlacement placement{GhostPlacement::Random};
  std::optional<Intention> intention;  // for Specific placement
  std::uint64_t seed{0};
};

// Ghost boxes are car-sized static objects (Figs. of ghost detections show
// car-class boxes).
inline constexpr Vec3 kGhostDims{4.0, 1.7, 1.5};

namespace attack_detail {

inline double lane_y_at(const Lane& lane, double x) {
  const auto& line = lane.centerline;
  if (line.size() < 2 || x <= line.front().x) return line.front().y;
  for (size_t i = 0; i + 1 < line.size(); ++i) {
    if (x <= line[i + 1].x) {
      const double t = (x - line[i].x) / (line[i + 1].x - line[i].x);
      return line[i].y + t * (line[i + 1].y - line[i].y);
    }
  }
  return line.back().y;
}

inline bool on_any_lane(const std::vector<Lane>& lanes, const Vec2& p) {
  for (const Lane& lane : lanes) {
    if (lane.contains(p)) return true;
  }
  return false;
}

inline int ego_lane_index(const Scenario& s) {
  const Vec2 p = s.ego_context.initial_state.p;
  int best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < s.lanes.size(); ++i) {
    const double dist = point_polyline_distance(p, s.lanes[i].centerline);
    if (dist < best_dist) {
      best_dist = dist;
      best = static_cast<int>(i);
    }
  }
  return best;
}

// Adjacent lane selected by the intention: left = larger centerline y.
inline int intention_lane_index(const Scenario& s, Intention intention) {
  const int ego_lane = ego_lane_index(s);
  if (intention == Intention::Straight || ego_lane < 0) return ego_lane;
  const double ego_x = s.ego_context.initial_state.p.x;
  const double ego_y = lane_y_at(s.lanes[ego_lane], ego_x);
  int best = -1;
  double best_gap = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < s.lanes.size(); ++i) {
    if (static_cast<int>(i) == ego_lane) continue;
    const double y = lane_y_at(s.lanes[i], ego_x);
    const double side = intention == Intention::Left ? y - ego_y : ego_y - y;
    if (side > 0.1 && side < best_gap) {
      best_gap = side;
      best = static_cast<int>(i);
    }
  }
  return best;
}

inline ClassifiedObject make_ghost(const Vec2& center, double yaw,
                                   double score) {
  ClassifiedObject ghost;
  ghost.box.center = {center.x, center.y, kGhostDims.z * 0.5};
  ghost.box.dims = kGhostDims;
  ghost.box.yaw = yaw;
  ghost.box.score = score;
  ghost.box.is_ghost = true;
  ghost.is_moving = false;
  return ghost;
}

}  // namespace attack_detail

/// Applies one effect model. Real objects are never deleted; ghosts carry
/// the is_ghost provenance flag so AP can treat them as detections without
/// ground truth.
inline std::vector<ClassifiedObject> inject_effect(
    const std::vector<ClassifiedObject>& objects, const Scenario& scenario,
    const EffectModel& model) {
  namespace ad = attack_detail;
  std::vector<ClassifiedObject> out = objects;
  if (model.intensity <= 0.0) return out;
  Rng rng(mix_seed(model.seed, static_cast<std::uint64_t>(model.kind)));

  double road_y_lo = std::numeric_limits<double>::infinity();
  double road_y_hi = -std::numeric_limits<double>::infinity();
  for (const Lane& lane : scenario.lanes) {
    for (const Vec2& p : lane.centerline) {
      road_y_lo = std::min(road_y_lo, p.y - lane.width * 0.5);
      road_y_hi = std::max(road_y_hi, p.y + lane.width * 0.5);
    }
  }

  switch (model.kind) {
    case EffectKind::RoadsideGhosts: {
      const int count = rng.poisson(model.intensity);
      for (int k = 0; k < count; ++k) {
        for (int attempt = 0; attempt < 32; ++attempt) {
          const double x = rng.uniform(0.0, 40.0);
          const bool left_side = rng.uniform() < 0.5;
          const double margin = rng.uniform(1.5, 4.5);
          const double y = left_side ? road_y_hi + margin : road_y_lo - margin;
          if (ad::on_any_lane(scenario.lanes, {x, y})) continue;
          out.push_back(
              ad::make_ghost({x, y}, 0.0, rng.uniform(0.6, 1.0)));
          break;
        }
      }
      break;
    }
    case EffectKind::OnRoadPatchGhost: {
      if (rng.uniform() >= std::min(1.0, model.intensity)) break;
      const double ego_x = scenario.ego_context.initial_state.p.x;
      int lane_idx = -1;
      double x = 0.0;
      if (model.placement == GhostPlacement::Specific && model.intention) {
        lane_idx = ad::intention_lane_index(scenario, *model.intention);
        // Straddle the 15 m goal region so the ghost's footprint blocks
        // the matching intention's approach.
        x = ego_x + rng.uniform(12.5, 17.5);
      } else {
        lane_idx = static_cast<int>(rng.uniform_int(scenario.lanes.size()));
        x = ego_x + rng.uniform(5.0, 40.0);
      }
      if (lane_idx < 0) lane_idx = ad::ego_lane_index(scenario);
      if (lane_idx < 0) break;
      const double y = ad::lane_y_at(scenario.lanes[lane_idx], x) +
                       rng.uniform(-0.5, 0.5);
      out.push_back(ad::make_ghost({x, y}, 0.0, rng.uniform(0.5, 0.75)));
      break;
    }
    case EffectKind::BoxDrift: {
      const double sigma = model.intensity;
      for (ClassifiedObject& obj : out) {
        if (obj.box.is_ghost) continue;
        obj.box.center.x += rng.gaussian(0.0, sigma);
        obj.box.center.y += rng.gaussian(0.0, sigma);
        obj.box.yaw = normalize_angle(obj.box.yaw +
                                      rng.uniform(-deg2rad(5.0), deg2rad(5.0)));
        // Attacked detections lose confidence with the drift.
        obj.box.score = rng.uniform(std::max(0.0, 1.0 - 2.0 * sigma), 1.0);
      }
      break;
    }
  }
  return out;
}

}  // namespace roadsafe

#endif  // ROADSAFE_ATTACKS_HPP_
