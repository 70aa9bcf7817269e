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

// Command-line driver for the driving-safety evaluation harness: generates
// the synthetic scenario suite, runs the selected attack sweep across the
// requested driving intentions, and writes report.csv plus manifest.json.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roadsafe/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

roadsafe::Intention parse_intention(const std::string& s) {
  if (s == "left") return roadsafe::Intention::Left;
  if (s == "straight") return roadsafe::Intention::Straight;
  if (s == "right") return roadsafe::Intention::Right;
  throw CLI::ValidationError("--intention", "unknown intention: " + s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "roadsafe: driving-safety evaluation of 3D detection under attack"};

  std::string config_path;
  std::uint64_t seed = 0;
  std::string attack = "none";
  double alpha = 0.2;
  double eps = 0.2;
  int iters = 10;
  int patch_radius = 16;
  std::string placement = "random";
  std::string intention = "all";
  std::string algo = "astar";
  std::string out_dir = "out";
  int jobs = 1;
  bool verbose = false;

  app.add_option("--config", config_path,
                 "JSON config file (n_scenarios, road_mix, detector, "
                 "theta_path); flags override");
  app.add_option("--seed", seed, "experiment seed");
  app.add_option("--attack", attack, "attack setting")
      ->check(CLI::IsMember(
          {"none", "pgd", "patch", "effect-perturb", "effect-patch"}));
  app.add_option("--alpha", alpha, "gradient step size (pgd)");
  app.add_option("--eps", eps, "per-step perturbation bound (pgd)");
  app.add_option("--iters", iters, "gradient iterations (pgd)");
  app.add_option("--patch-radius", patch_radius, "patch radius in px");
  app.add_option("--placement", placement, "patch placement policy")
      ->check(CLI::IsMember({"random", "specific"}));
  app.add_option("--intention", intention, "driving intention(s)")
      ->check(CLI::IsMember({"left", "straight", "right", "all"}));
  app.add_option("--algo", algo, "planner algorithm")
      ->check(CLI::IsMember({"astar", "gbfs"}));
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", verbose, "progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  roadsafe::ExperimentConfig cfg;
  cfg.n_scenarios = 600;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "error: cannot open config: " << config_path << "\n";
        return kExitIoError;
      }
      nlohmann::json j = nlohmann::json::parse(in);
      if (j.contains("n_scenarios")) cfg.n_scenarios = j["n_scenarios"];
      if (j.contains("road_mix")) cfg.road_mix = j["road_mix"];
      if (j.contains("theta_path"))
        cfg.theta_path = j["theta_path"].get<std::string>();
      if (j.contains("detector")) {
        const std::string d = j["detector"].get<std::string>();
        if (d == "surrogate") {
          cfg.detector = roadsafe::DetectorMode::Surrogate;
        } else if (d == "passthrough") {
          cfg.detector = roadsafe::DetectorMode::GroundTruthPassthrough;
        } else {
          std::cerr << "error: unknown detector: " << d << "\n";
          return kExitConfigError;
        }
      }
    }

    cfg.seed = seed;
    cfg.out_dir = out_dir;
    cfg.jobs = jobs;
    cfg.verbose = verbose;
    cfg.algo = algo == "astar" ? roadsafe::PlannerAlgo::AStar
                               : roadsafe::PlannerAlgo::GreedyBFS;

    cfg.intentions.clear();
    if (intention == "all") {
      cfg.intentions = {roadsafe::Intention::Left,
                        roadsafe::Intention::Straight,
                        roadsafe::Intention::Right};
    } else {
      cfg.intentions = {parse_intention(intention)};
    }

    cfg.attacks.clear();
    if (attack == "none") {
      cfg.attacks = {roadsafe::AttackNone{}};
    } else if (attack == "pgd") {
      roadsafe::PerturbationConfig pc{eps, alpha, iters};
      if (!pc.valid()) {
        std::cerr << "error: invalid pgd parameters (need eps >= 0, "
                     "alpha >= 0, iters >= 0)\n";
        return kExitConfigError;
      }
      // Gradient attacks operate on rendered images, so they require the
      // surrogate detector.
      cfg.detector = roadsafe::DetectorMode::Surrogate;
      cfg.attacks = {roadsafe::AttackNone{}, roadsafe::AttackPgd{pc}};
    } else if (attack == "patch") {
      if (patch_radius < 1 ||
          patch_radius > roadsafe::Patch::kMaxRadius) {
        std::cerr << "error: --patch-radius out of range [1, "
                  << roadsafe::Patch::kMaxRadius << "]\n";
        return kExitConfigError;
      }
      cfg.attacks = {
          roadsafe::AttackNone{},
          roadsafe::AttackPatch{
              patch_radius,
              placement == "specific"
                  ? roadsafe::PlacementPolicy::RegionForIntention
                  : roadsafe::PlacementPolicy::RandomWholeImage}};
    } else if (attack == "effect-perturb") {
      cfg.attacks.clear();
      for (int level = 0; level <= 4; ++level) {
        cfg.attacks.push_back(roadsafe::AttackEffectPerturb{level});
      }
    } else if (attack == "effect-patch") {
      cfg.attacks = {
          roadsafe::AttackNone{},
          roadsafe::AttackEffectPatch{
              placement == "specific" ? roadsafe::GhostPlacement::Specific
                                      : roadsafe::GhostPlacement::Random}};
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: config parse: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    if (verbose) {
      std::fprintf(stderr, "running %d scenarios, %zu intentions, %zu settings, jobs=%d\n",
                   cfg.n_scenarios, cfg.intentions.size(), cfg.attacks.size(),
                   cfg.jobs > 0 ? cfg.jobs : 1);
    }
    const roadsafe::ExperimentResult result = roadsafe::run_experiment(cfg);
    if (verbose) {
      for (const roadsafe::ReportRow& row : result.report.rows) {
        std::fprintf(stderr, "  %-8s %-24s m_suc=%.4f m_saf=%.4f\n",
                     roadsafe::to_string(row.intention), row.setting.c_str(),
                     row.rates.m_suc, row.rates.m_saf);
      }
    }
    std::cout << cfg.out_dir << "/report.csv\n";
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}
