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
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>
#include <vector>

#include "roadsafe/attacks.hpp"
#include "roadsafe/rng.hpp"
#include "roadsafe/surrogate.hpp"

namespace roadsafe {
namespace {

DetectedBox3D car_at(double x, double y) {
  DetectedBox3D b;
  b.center = {x, y, 0.75};
  b.dims = {4.2, 1.7, 1.5};
  return b;
}

const DetectorSurrogate& fitted() {
  static const DetectorSurrogate d = fit_surrogate(GridSpec{}, 1234);
  return d;
}

TEST_CASE("zero-iteration perturbation is the identity") {
  const DetectorSurrogate& d = fitted();
  const std::vector<DetectedBox3D> scene{car_at(14.0, 2.0)};
  const StereoImagePair img = render_scene(d.grid, scene);
  const PgdResult out = pgd_perturb(d, img, scene, {0.5, 0.5, 0});
  CHECK(out.image.left == img.left);
  CHECK(out.image.right == img.right);
  CHECK(out.loss_curve.size() == 1);
}

TEST_CASE("per-step delta is clipped to epsilon and pixels stay valid") {
  const DetectorSurrogate& d = fitted();
  const std::vector<DetectedBox3D> scene{car_at(14.0, 2.0)};
  const StereoImagePair img = render_scene(d.grid, scene);
  const double eps = 0.3;
  const PgdResult out = pgd_perturb(d, img, scene, {eps, 0.5, 8});
  REQUIRE(out.step_max_delta.size() == 8);
  for (double delta : out.step_max_delta) {
    REQUIRE(delta <= eps + 1e-15);
  }
  // Cumulative bound N * eps on the unclamped update; the final [0, 255]
  // clamp can only shrink the difference.
  for (size_t k = 0; k < img.left.size(); ++k) {
    REQUIRE(std::abs(out.image.left[k] - img.left[k]) <= 8.0 * eps + 1e-12);
    REQUIRE(out.image.left[k] >= 0.0);
    REQUIRE(out.image.left[k] <= 255.0);
  }
}

TEST_CASE("one-step update follows the hand-computed sign rule") {
  const DetectorSurrogate& d = fitted();
  const std::vector<DetectedBox3D> scene{car_at(14.0, 2.0)};
  const StereoImagePair img = render_scene(d.grid, scene);
  const DetectionLoss loss = loss_and_gradient(d, img, scene);
  const double alpha = 0.7, eps = 0.5;
  const PgdResult out = pgd_perturb(d, img, scene, {eps, alpha, 1});
  // delta = clip_eps(alpha * sign(grad)), applied additively, then the
  // final clamp to [0, 255].
  for (size_t k = 0; k < img.left.size(); ++k) {
    const double g = loss.gradient.left[k];
    const double sign = g > 0.0 ? 1.0 : (g < 0.0 ? -1.0 : 0.0);
    const double expected = std::clamp(
        img.left[k] + std::clamp(alpha * sign, -eps, eps), 0.0, 255.0);
    REQUIRE(out.image.left[k] == Catch::Approx(expected).margin(1e-12));
  }
}

TEST_CASE("sign-ascent increases the surrogate loss across seeds") {
  const DetectorSurrogate& d = fitted();
  Rng rng(808);
  int monotone = 0;
  const int runs = 20;
  for (int k = 0; k < runs; ++k) {
    const std::vector<DetectedBox3D> scene{
        car_at(rng.uniform(8.0, 35.0), rng.uniform(-8.0, 8.0))};
    const StereoImagePair img = render_scene(d.grid, scene);
    const PgdResult out = pgd_perturb(d, img, scene, {0.4, 0.4, 6});
    REQUIRE(out.loss_curve.size() == 7);
    bool ok = true;
    for (size_t i = 1; i < out.loss_curve.size(); ++i) {
      if (out.loss_curve[i] < out.loss_curve[i - 1] - 1e-9) ok = false;
    }
    if (ok) ++monotone;
    CHECK(out.loss_curve.back() > out.loss_curve.front());
  }
  CHECK(monotone >= runs * 95 / 100);
}

TEST_CASE("invalid perturbation configs are rejected") {
  const DetectorSurrogate& d = fitted();
  const StereoImagePair img(d.grid.rows(), d.grid.cols());
  CHECK_THROWS_AS(pgd_perturb(d, img, {}, {-0.1, 0.5, 3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(pgd_perturb(d, img, {}, {0.5, -0.1, 3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(pgd_perturb(d, img, {}, {0.5, 0.5, -1}),
                  std::invalid_argument);
}

TEST_CASE("gray patch paste changes exactly the disc pixels") {
  const GridSpec grid;
  StereoImagePair img(grid.rows(), grid.cols());
  for (double& p : img.left) p = 10.0;
  for (double& p : img.right) p = 10.0;
  Patch patch(8, 128.0);
  PatchSpec spec;
  spec.patch = patch;
  spec.loc_l = {60, 40};
  spec.loc_r = {50, 40};
  spec.rotation = 0.0;
  const StereoImagePair out = apply_patch(img, spec);
  int changed = 0;
  for (size_t k = 0; k < out.left.size(); ++k) {
    if (out.left[k] != img.left[k]) ++changed;
  }
  const double disc_area = std::numbers::pi * 8.0 * 8.0;
  const double perimeter = 2.0 * std::numbers::pi * 8.0;
  CHECK(std::abs(changed / 3.0 - disc_area) < perimeter + 8.0);
  // Disparity-consistent: right paste shifted by loc difference only.
  for (int r = 0; r < 17; ++r) {
    for (int c = 0; c < 17; ++c) {
      REQUIRE(out.left[out.index(40 + r, 60 + c, 0)] ==
              out.right[out.index(40 + r, 50 + c, 0)]);
    }
  }
}

TEST_CASE("modified pixel count is stable under rotation") {
  const GridSpec grid;
  StereoImagePair img(grid.rows(), grid.cols());
  Patch patch(10, 77.0);
  Rng rng(66);
  for (int k = 0; k < 20; ++k) {
    PatchSpec spec;
    spec.patch = patch;
    spec.loc_l = {60, 40};
    spec.loc_r = {45, 40};
    spec.rotation = rng.uniform(-kPatchMaxRotation, kPatchMaxRotation);
    const StereoImagePair out = apply_patch(img, spec);
    int changed = 0;
    for (size_t p = 0; p < out.left.size(); ++p) {
      if (out.left[p] != img.left[p]) ++changed;
    }
    const double disc_area = std::numbers::pi * 10.0 * 10.0;
    const double perimeter = 2.0 * std::numbers::pi * 10.0;
    REQUIRE(std::abs(changed / 3.0 - disc_area) < perimeter + 10.0);
  }
}

TEST_CASE("rotation-free patching is idempotent") {
  const GridSpec grid;
  StereoImagePair img(grid.rows(), grid.cols());
  for (size_t k = 0; k < img.left.size(); ++k) img.left[k] = k % 251;
  Patch patch(6, 200.0);
  PatchSpec spec;
  spec.patch = patch;
  spec.loc_l = {30, 30};
  spec.loc_r = {25, 30};
  const StereoImagePair once = apply_patch(img, spec);
  const StereoImagePair twice = apply_patch(once, spec);
  CHECK(once.left == twice.left);
  CHECK(once.right == twice.right);
}

TEST_CASE("out-of-bounds and invalid patch specs are rejected") {
  const GridSpec grid;
  const StereoImagePair img(grid.rows(), grid.cols());
  Patch patch(10);
  PatchSpec spec;
  spec.patch = patch;

  spec.loc_l = {5, 30};  // disparity would be negative
  spec.loc_r = {15, 30};
  CHECK_THROWS_AS(apply_patch(img, spec), PatchOutOfBounds);

  spec.loc_l = {200, 30};  // disparity beyond 40
  spec.loc_r = {100, 30};
  CHECK_THROWS_AS(apply_patch(img, spec), PatchOutOfBounds);

  spec.loc_l = {60, 30};
  spec.loc_r = {50, 31};  // rows differ
  CHECK_THROWS_AS(apply_patch(img, spec), PatchOutOfBounds);

  spec.loc_r = {50, 30};
  spec.rotation = deg2rad(11.0);  // beyond +-10 degrees
  CHECK_THROWS_AS(apply_patch(img, spec), PatchOutOfBounds);

  spec.rotation = 0.0;
  spec.loc_l = {grid.cols() - 5, 30};  // leaves the image
  spec.loc_r = {grid.cols() - 15, 30};
  CHECK_THROWS_AS(apply_patch(img, spec), PatchOutOfBounds);
}

TEST_CASE("zero disparity places the patch at identical columns") {
  const GridSpec grid;
  StereoImagePair img(grid.rows(), grid.cols());
  Patch patch(4, 99.0);
  PatchSpec spec;
  spec.patch = patch;
  spec.loc_l = {40, 40};
  spec.loc_r = {40, 40};
  CHECK(spec.disparity() == 0);
  const StereoImagePair out = apply_patch(img, spec);
  CHECK(out.left == out.right);
}

std::vector<std::pair<StereoImagePair, std::vector<DetectedBox3D>>>
patch_dataset(const GridSpec& grid, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<StereoImagePair, std::vector<DetectedBox3D>>> out;
  for (int k = 0; k < n; ++k) {
    std::vector<DetectedBox3D> scene{
        car_at(rng.uniform(8.0, 35.0), rng.uniform(-8.0, 8.0))};
    out.emplace_back(render_scene(grid, scene), scene);
  }
  return out;
}

TEST_CASE("zero step size leaves the patch at its initialization") {
  const DetectorSurrogate& d = fitted();
  const auto dataset = patch_dataset(d.grid, 2, 12);
  PatchTrainingConfig cfg;
  cfg.target_boxes = {car_at(12.0, 0.0)};
  cfg.epochs = 1;
  cfg.step_size = 0.0;
  cfg.seed = 5;
  const PatchTrainResult result = train_patch(d, dataset, cfg);
  const Patch init(cfg.radius);
  CHECK(result.patch.pixels == init.pixels);
  CHECK(result.objective_curve.size() == 2);
}

TEST_CASE("patch training is bit-identical across runs with one seed") {
  const DetectorSurrogate& d = fitted();
  const auto dataset = patch_dataset(d.grid, 3, 21);
  PatchTrainingConfig cfg;
  cfg.target_boxes = {car_at(12.0, 0.0)};
  cfg.epochs = 5;
  cfg.seed = 99;
  const PatchTrainResult a = train_patch(d, dataset, cfg);
  const PatchTrainResult b = train_patch(d, dataset, cfg);
  CHECK(a.patch.pixels == b.patch.pixels);
  CHECK(a.objective_curve == b.objective_curve);
}

TEST_CASE("short training already lowers the objective") {
  const DetectorSurrogate& d = fitted();
  const auto dataset = patch_dataset(d.grid, 4, 33);
  PatchTrainingConfig cfg;
  cfg.target_boxes = {car_at(12.0, 0.0)};
  cfg.epochs = 20;
  cfg.seed = 7;
  const PatchTrainResult result = train_patch(d, dataset, cfg);
  REQUIRE(result.objective_curve.size() == 21);
  double best = result.objective_curve[0];
  for (double v : result.objective_curve) best = std::min(best, v);
  CHECK(best < result.objective_curve[0]);
}

TEST_CASE("patch serialization writes a PPM with sidecar") {
  Patch patch(3, 100.0);
  const std::string path = "patch_test.ppm";
  save_patch(patch, path, 42, 10);
  std::ifstream in(path, std::ios::binary);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  CHECK(magic == "P6");
  CHECK(w == 7);
  CHECK(h == 7);
  CHECK(maxval == 255);
  std::ifstream meta(path + ".json");
  std::string sidecar((std::istreambuf_iterator<char>(meta)),
                      std::istreambuf_iterator<char>());
  CHECK(sidecar.find("\"radius\": 3") != std::string::npos);
  CHECK(sidecar.find("\"seed\": 42") != std::string::npos);
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
}

}  // namespace
}  // namespace roadsafe
