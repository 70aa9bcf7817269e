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

#ifndef ROADSAFE_METRICS_HPP_
#define ROADSAFE_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "roadsafe/geom.hpp"
#include "roadsafe/types.hpp"

namespace roadsafe {

struct ScenarioOutcome {
  std::string scenario_id;
  Intention intention{Intention::Straight};
  bool planned{false};
  bool collided{false};  // only meaningful when planned
};

struct SafetyRates {
  long k_dts{0};
  long k_trj{0};
  long k_cls{0};
  double m_suc{0.0};
  std::optional<double> m_cls;  // undefined when k_trj = 0
  double m_saf{0.0};
};

class EmptyDataset : public std::runtime_error {
 public:
  EmptyDataset() : std::runtime_error("safety_metrics: empty outcome list") {}
};

/// m_suc = k_trj / k_dts, m_cls = k_cls / k_trj,
/// m_saf = (k_trj - k_cls) / k_dts = (1 - m_cls) * m_suc.
inline SafetyRates safety_metrics(const std::vector<ScenarioOutcome>& outcomes) {
  if (outcomes.empty()) throw EmptyDataset();
  SafetyRates r;
  r.k_dts = static_cast<long>(outcomes.size());
  for (const auto& o : outcomes) {
    if (o.planned) {
      ++r.k_trj;
      if (o.collided) ++r.k_cls;
    }
  }
  r.m_suc = static_cast<double>(r.k_trj) / static_cast<double>(r.k_dts);
  if (r.k_trj > 0) {
    r.m_cls = static_cast<double>(r.k_cls) / static_cast<double>(r.k_trj);
    r.m_saf = (1.0 - *r.m_cls) * r.m_suc;
  } else {
    r.m_saf = 0.0;
  }
  return r;
}

/// 3D IoU: BEV oriented-polygon overlap area times vertical overlap,
/// divided by the union of volumes.
inline double iou_3d(const DetectedBox3D& a, const DetectedBox3D& b) {
  const double bev = rect_overlap_area(a.footprint(), b.footprint());
  if (bev <= 0.0) return 0.0;
  const double a_lo = a.center.z - a.dims.z * 0.5;
  const double a_hi = a.center.z + a.dims.z * 0.5;
  const double b_lo = b.center.z - b.dims.z * 0.5;
  const double b_hi = b.center.z + b.dims.z * 0.5;
  const double dz = std::min(a_hi, b_hi) - std::max(a_lo, b_lo);
  if (dz <= 0.0) return 0.0;
  const double inter = bev * dz;
  const double vol_a = a.dims.x * a.dims.y * a.dims.z;
  const double vol_b = b.dims.x * b.dims.y * b.dims.z;
  return inter / (vol_a + vol_b - inter);
}

enum class Difficulty { Easy, Moderate, Hard };

/// Distance bands substitute for KITTI's 2D-bbox-height rule; the harness
/// has no 2D boxes, and bands preserve the easy < moderate < hard order.
inline double difficulty_max_distance(Difficulty d) {
  switch (d) {
    case Difficulty::Easy: return 15.0;
    case Difficulty::Moderate: return 30.0;
    case Difficulty::Hard: return 50.0;
  }
  return 0.0;
}

/// 11-point interpolated AP with greedy score-descending matching. Ground
/// truths outside the difficulty band do not count toward recall, and
/// detections matched to them are ignored rather than penalized. Returns
/// nullopt when the band holds no ground truths.
inline std::optional<double> average_precision(
    const std::vector<DetectedBox3D>& dets,
    const std::vector<DetectedBox3D>& gts, double iou_thr = 0.7,
    Difficulty difficulty = Difficulty::Hard) {
  const double band = difficulty_max_distance(difficulty);

  std::vector<bool> gt_in_band(gts.size());
  int npos = 0;
  for (size_t i = 0; i < gts.size(); ++i) {
    gt_in_band[i] = gts[i].center.xy().norm() <= band;
    if (gt_in_band[i]) ++npos;
  }
  if (npos == 0) return std::nullopt;

  std::vector<int> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&dets](int a, int b) {
    return dets[a].score > dets[b].score;
  });

  std::vector<bool> gt_matched(gts.size(), false);
  std::vector<double> precision, recall;
  int tp = 0, fp = 0;
  for (int di : order) {
    double best_iou = 0.0;
    int best_gt = -1;
    for (size_t gi = 0; gi < gts.size(); ++gi) {
      if (gt_matched[gi]) continue;
      const double iou = iou_3d(dets[di], gts[gi]);
      if (iou > best_iou) {
        best_iou = iou;
        best_gt = static_cast<int>(gi);
      }
    }
    if (best_gt >= 0 && best_iou >= iou_thr) {
      gt_matched[best_gt] = true;
      if (!gt_in_band[best_gt]) continue;  // ignored, not penalized
      ++tp;
    } else {
      ++fp;
    }
    precision.push_back(static_cast<double>(tp) /
                        static_cast<double>(tp + fp));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(npos));
  }

  double ap = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const double r = 0.1 * i;
    double best = 0.0;
    for (size_t k = 0; k < recall.size(); ++k) {
      if (recall[k] >= r - 1e-12) best = std::max(best, precision[k]);
    }
    ap += best / 11.0;
  }
  return ap;
}

}  // namespace roadsafe

#endif  // ROADSAFE_METRICS_HPP_
