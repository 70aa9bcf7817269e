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

#ifndef ROADSAFE_SURROGATE_HPP_
#define ROADSAFE_SURROGATE_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "roadsafe/geom.hpp"
#include "roadsafe/rng.hpp"
#include "roadsafe/types.hpp"

namespace roadsafe {

class DimensionMismatch : public std::runtime_error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : std::runtime_error("dimension mismatch: " + what) {}
};

/// Coarse BEV grid the detector scores. Covers x in [0, extent] and
/// y in [-extent/3, extent/3], 8x8 image pixels per cell.
struct GridSpec {
  double cell_m{2.0};
  double extent_m{48.0};

  static constexpr int kPxPerCell = 8;

  int nx() const { return static_cast<int>(extent_m / cell_m); }
  int ny() const { return static_cast<int>(2.0 * extent_m / 3.0 / cell_m); }
  int n_cells() const { return nx() * ny(); }
  int rows() const { return nx() * kPxPerCell; }       // row axis = x (depth)
  int cols() const { return ny() * kPxPerCell; }       // col axis = y (lateral)
  double m_per_px() const { return cell_m / kPxPerCell; }
  double y_max() const { return extent_m / 3.0; }

  double cell_center_x(int i) const { return (i + 0.5) * cell_m; }
  double cell_center_y(int j) const { return y_max() - (j + 0.5) * cell_m; }

  // Stereo disparity of a point at depth x, in meters of lateral shift.
  double disparity_m(double x) const { return 30.0 / std::max(x, 3.0); }
  int disparity_px(double x) const {
    return static_cast<int>(std::lround(disparity_m(x) / m_per_px()));
  }
};

/// Real-valued stereo image pair, pixels nominally in [0, 255],
/// row-major, 3 channels. Left and right always share dimensions.
struct StereoImagePair {
  int rows{0};
  int cols{0};
  std::vector<double> left;
  std::vector<double> right;

  StereoImagePair() = default;
  StereoImagePair(int r, int c)
      : rows(r), cols(c), left(static_cast<size_t>(r) * c * 3, 0.0),
        right(static_cast<size_t>(r) * c * 3, 0.0) {}

  size_t index(int r, int c, int ch) const {
    return (static_cast<size_t>(r) * cols + c) * 3 + ch;
  }
  bool same_shape(const StereoImagePair& o) const {
    return rows == o.rows && cols == o.cols;
  }
};

/// Patch-wise linear stereo detector: one shared 8x8x2 linear score
/// filter plus six shared linear box regressors applied per grid cell.
/// The regressors read a 24x24 px window centered on the cell (2x2 mean
/// pooled) so a car longer than one cell still shows its edges to the
/// regression. Linear by construction so pixel gradients are exact.
struct DetectorSurrogate {
  GridSpec grid;
  std::vector<double> theta;

  static constexpr int kFeatures = 2 * GridSpec::kPxPerCell * GridSpec::kPxPerCell;
  static constexpr int kRegWindow = 3 * GridSpec::kPxPerCell;  // px
  static constexpr int kRegPool = 2;
  static constexpr int kRegSide = kRegWindow / kRegPool;
  static constexpr int kRegFeatures = 2 * kRegSide * kRegSide;
  static constexpr int kRegOutputs = 6;  // dx, dy, l, w, h, yaw
  static constexpr int kParams =
      (kFeatures + 1) + kRegOutputs * (kRegFeatures + 1);

  DetectorSurrogate() : theta(kParams, 0.0) {}

  const double* score_weights() const { return theta.data(); }
  double score_bias() const { return theta[kFeatures]; }
  const double* reg_weights(int k) const {
    return theta.data() + (kFeatures + 1) + k * (kRegFeatures + 1);
  }
  double reg_bias(int k) const {
    return theta[(kFeatures + 1) + k * (kRegFeatures + 1) + kRegFeatures];
  }
};

struct DetectionLoss {
  double value{0.0};
  StereoImagePair gradient;
};

namespace surrogate_detail {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double softplus(double z) {
  // Stable log(1 + e^z).
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline double smooth_l1(double d) {
  const double a = std::abs(d);
  return a < 1.0 ? 0.5 * d * d : a - 0.5;
}

inline double smooth_l1_grad(double d) { return std::clamp(d, -1.0, 1.0); }

// Channel-mean pixel feature scaled to ~[0, 1]; zero outside the image.
inline double pixel_feature(const std::vector<double>& img, int rows, int cols,
                            int r, int c) {
  if (r < 0 || r >= rows || c < 0 || c >= cols) return 0.0;
  const size_t base = (static_cast<size_t>(r) * cols + c) * 3;
  return (img[base] + img[base + 1] + img[base + 2]) / (3.0 * 255.0);
}

// Mean of a pool x pool pixel block (zero-padded at the image border).
inline double pooled_feature(const std::vector<double>& img, int rows,
                             int cols, int r, int c, int pool) {
  double sum = 0.0;
  for (int dr = 0; dr < pool; ++dr) {
    for (int dc = 0; dc < pool; ++dc) {
      sum += pixel_feature(img, rows, cols, r + dr, c + dc);
    }
  }
  return sum / (pool * pool);
}

// Fills both-view pooled features of a W x W pixel window with its left
// top-left corner at (r0, c0); the right view is sampled dpx columns to
// the right (the stereo disparity at the cell depth).
inline void window_features(const StereoImagePair& img, int r0, int c0, int W,
                            int pool, int dpx, double* out) {
  const int side = W / pool;
  int k = 0;
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      out[k++] = pooled_feature(img.left, img.rows, img.cols, r0 + r * pool,
                                c0 + c * pool, pool);
    }
  }
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      out[k++] = pooled_feature(img.right, img.rows, img.cols, r0 + r * pool,
                                c0 + c * pool + dpx, pool);
    }
  }
}

/// Fills the 128 score features of cell (i, j): the 8x8 left block and
/// the disparity-shifted 8x8 right block.
inline void cell_features(const GridSpec& grid, const StereoImagePair& img,
                          int i, int j, double* out) {
  constexpr int P = GridSpec::kPxPerCell;
  window_features(img, i * P, j * P, P, 1,
                  grid.disparity_px(grid.cell_center_x(i)), out);
}

/// Fills the pooled regression features of cell (i, j): a 24x24 window
/// centered on the cell block, 2x2 mean pooled, both views.
inline void reg_features(const GridSpec& grid, const StereoImagePair& img,
                         int i, int j, double* out) {
  constexpr int P = GridSpec::kPxPerCell;
  window_features(img, (i - 1) * P, (j - 1) * P, DetectorSurrogate::kRegWindow,
                  DetectorSurrogate::kRegPool,
                  grid.disparity_px(grid.cell_center_x(i)), out);
}

// Scatters d(loss)/d(pooled feature) back onto image pixels for the same
// window geometry window_features reads.
inline void accumulate_window_grad(StereoImagePair& grad, int r0, int c0,
                                   int W, int pool, int dpx,
                                   const double* dfeat) {
  const int side = W / pool;
  const double scale = 1.0 / (3.0 * 255.0 * pool * pool);
  auto scatter = [&](std::vector<double>& plane, int col_shift, int base) {
    int k = base;
    for (int r = 0; r < side; ++r) {
      for (int c = 0; c < side; ++c, ++k) {
        for (int dr = 0; dr < pool; ++dr) {
          for (int dc = 0; dc < pool; ++dc) {
            const int rr = r0 + r * pool + dr;
            const int cc = c0 + c * pool + dc + col_shift;
            if (rr < 0 || rr >= grad.rows || cc < 0 || cc >= grad.cols) {
              continue;
            }
            for (int ch = 0; ch < 3; ++ch) {
              plane[grad.index(rr, cc, ch)] += dfeat[k] * scale;
            }
          }
        }
      }
    }
  };
  scatter(grad.left, 0, 0);
  scatter(grad.right, dpx, side * side);
}

inline void check_dims(const DetectorSurrogate& d, const StereoImagePair& img) {
  if (img.rows != d.grid.rows() || img.cols != d.grid.cols()) {
    throw DimensionMismatch("image " + std::to_string(img.rows) + "x" +
                            std::to_string(img.cols) + ", surrogate expects " +
                            std::to_string(d.grid.rows()) + "x" +
                            std::to_string(d.grid.cols()));
  }
}

// Cell index of a box center, or -1 when outside the grid.
inline int label_cell(const GridSpec& grid, const DetectedBox3D& box) {
  const int i = static_cast<int>(std::floor(box.center.x / grid.cell_m));
  const int j =
      static_cast<int>(std::floor((grid.y_max() - box.center.y) / grid.cell_m));
  if (i < 0 || i >= grid.nx() || j < 0 || j >= grid.ny()) return -1;
  return i * grid.ny() + j;
}

}  // namespace surrogate_detail

/// Rasterizes box footprints as intensity rectangles (fractional pixel
/// coverage, all channels), with the right view shifted laterally by the
/// stereo disparity at the box depth. Minimal stereo-consistent model;
/// no occlusion.
inline StereoImagePair render_scene(const GridSpec& grid,
                                    const std::vector<DetectedBox3D>& boxes,
                                    double intensity = 180.0) {
  StereoImagePair img(grid.rows(), grid.cols());
  const double mpx = grid.m_per_px();

  auto draw = [&](std::vector<double>& plane, const OrientedRect& rect) {
    const double radius = rect.half_dims.norm();
    const int r_lo = std::max(
        0, static_cast<int>(std::floor((rect.center.x - radius) / mpx)) - 1);
    const int r_hi = std::min(
        img.rows - 1,
        static_cast<int>(std::ceil((rect.center.x + radius) / mpx)) + 1);
    const int c_lo = std::max(
        0, static_cast<int>(
               std::floor((grid.y_max() - rect.center.y - radius) / mpx)) - 1);
    const int c_hi = std::min(
        img.cols - 1,
        static_cast<int>(
            std::ceil((grid.y_max() - rect.center.y + radius) / mpx)) + 1);
    const auto poly = rect_polygon(rect);
    for (int r = r_lo; r <= r_hi; ++r) {
      for (int c = c_lo; c <= c_hi; ++c) {
        int inside = 0;
        for (int sr = 0; sr < 4; ++sr) {
          for (int sc = 0; sc < 4; ++sc) {
            const Vec2 p{(r + (sr + 0.5) / 4.0) * mpx,
                         grid.y_max() - (c + (sc + 0.5) / 4.0) * mpx};
            if (point_in_convex_polygon(p, poly)) ++inside;
          }
        }
        if (inside == 0) continue;
        const double add = intensity * inside / 16.0;
        const size_t base = (static_cast<size_t>(r) * img.cols + c) * 3;
        for (int ch = 0; ch < 3; ++ch) {
          plane[base + ch] = std::min(255.0, plane[base + ch] + add);
        }
      }
    }
  };

  for (const DetectedBox3D& box : boxes) {
    const OrientedRect fp = box.footprint();
    draw(img.left, fp);
    OrientedRect shifted = fp;
    shifted.center.y -= grid.disparity_m(box.center.x);
    draw(img.right, shifted);
  }
  return img;
}

/// Runs the surrogate: per-cell score logits, kept above threshold and
/// only at local maxima of the logit map (8-neighborhood, ties to the
/// lower cell index), then box parameters from the regressors.
inline std::vector<DetectedBox3D> detect(const DetectorSurrogate& d,
                                         const StereoImagePair& img,
                                         double score_threshold = 0.5) {
  surrogate_detail::check_dims(d, img);
  const GridSpec& grid = d.grid;
  const int nx = grid.nx(), ny = grid.ny();
  std::vector<double> logits(static_cast<size_t>(nx) * ny);
  std::vector<double> feat(DetectorSurrogate::kFeatures);

  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      surrogate_detail::cell_features(grid, img, i, j, feat.data());
      double z = d.score_bias();
      for (int k = 0; k < DetectorSurrogate::kFeatures; ++k) {
        z += d.score_weights()[k] * feat[k];
      }
      logits[i * ny + j] = z;
    }
  }

  const double logit_thr = std::log(score_threshold / (1.0 - score_threshold));
  std::vector<DetectedBox3D> out;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const int idx = i * ny + j;
      const double z = logits[idx];
      if (!(z > logit_thr)) continue;
      bool is_peak = true;
      for (int di = -1; di <= 1 && is_peak; ++di) {
        for (int dj = -1; dj <= 1 && is_peak; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int ni = i + di, nj = j + dj;
          if (ni < 0 || ni >= nx || nj < 0 || nj >= ny) continue;
          const int nidx = ni * ny + nj;
          if (logits[nidx] > z || (logits[nidx] == z && nidx < idx)) {
            is_peak = false;
          }
        }
      }
      if (!is_peak) continue;

      std::vector<double> rfeat(DetectorSurrogate::kRegFeatures);
      surrogate_detail::reg_features(grid, img, i, j, rfeat.data());
      double reg[DetectorSurrogate::kRegOutputs];
      for (int k = 0; k < DetectorSurrogate::kRegOutputs; ++k) {
        double v = d.reg_bias(k);
        for (int f = 0; f < DetectorSurrogate::kRegFeatures; ++f) {
          v += d.reg_weights(k)[f] * rfeat[f];
        }
        reg[k] = v;
      }
      DetectedBox3D box;
      const double half = grid.cell_m;
      box.center.x = grid.cell_center_x(i) + std::clamp(reg[0], -half, half);
      box.center.y = grid.cell_center_y(j) + std::clamp(reg[1], -half, half);
      box.dims.x = std::max(0.5, reg[2]);
      box.dims.y = std::max(0.5, reg[3]);
      box.dims.z = std::max(0.5, reg[4]);
      box.center.z = box.dims.z * 0.5;
      box.yaw = normalize_angle(reg[5]);
      box.score = surrogate_detail::sigmoid(z);
      out.push_back(box);
    }
  }
  return out;
}

/// Score-map cross-entropy plus smooth-L1 on box parameters at label
/// cells, with the exact analytic gradient with respect to the pixels.
inline DetectionLoss loss_and_gradient(const DetectorSurrogate& d,
                                       const StereoImagePair& img,
                                       const std::vector<DetectedBox3D>& labels) {
  namespace sd = surrogate_detail;
  sd::check_dims(d, img);
  const GridSpec& grid = d.grid;
  const int nx = grid.nx(), ny = grid.ny();

  // Cell targets.
  std::vector<int> target_label(static_cast<size_t>(nx) * ny, -1);
  for (size_t li = 0; li < labels.size(); ++li) {
    const int cell = sd::label_cell(grid, labels[li]);
    if (cell >= 0 && target_label[cell] < 0) {
      target_label[cell] = static_cast<int>(li);
    }
  }

  DetectionLoss result;
  result.gradient = StereoImagePair(img.rows, img.cols);
  constexpr int P = GridSpec::kPxPerCell;
  std::vector<double> feat(DetectorSurrogate::kFeatures);
  std::vector<double> dfeat(DetectorSurrogate::kFeatures);
  std::vector<double> rfeat(DetectorSurrogate::kRegFeatures);
  std::vector<double> drfeat(DetectorSurrogate::kRegFeatures);

  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const int cell = i * ny + j;
      const double t = target_label[cell] >= 0 ? 1.0 : 0.0;
      const int dpx = grid.disparity_px(grid.cell_center_x(i));
      sd::cell_features(grid, img, i, j, feat.data());

      double z = d.score_bias();
      for (int k = 0; k < DetectorSurrogate::kFeatures; ++k) {
        z += d.score_weights()[k] * feat[k];
      }
      // BCE(sigmoid(z), t) = softplus(z) - t*z.
      result.value += sd::softplus(z) - t * z;
      const double dz = sd::sigmoid(z) - t;
      for (int k = 0; k < DetectorSurrogate::kFeatures; ++k) {
        dfeat[k] = dz * d.score_weights()[k];
      }
      sd::accumulate_window_grad(result.gradient, i * P, j * P, P, 1, dpx,
                                 dfeat.data());

      if (target_label[cell] >= 0) {
        const DetectedBox3D& lab = labels[target_label[cell]];
        const double targets[DetectorSurrogate::kRegOutputs] = {
            lab.center.x - grid.cell_center_x(i),
            lab.center.y - grid.cell_center_y(j),
            lab.dims.x,
            lab.dims.y,
            lab.dims.z,
            lab.yaw};
        sd::reg_features(grid, img, i, j, rfeat.data());
        std::fill(drfeat.begin(), drfeat.end(), 0.0);
        for (int k = 0; k < DetectorSurrogate::kRegOutputs; ++k) {
          double v = d.reg_bias(k);
          for (int f = 0; f < DetectorSurrogate::kRegFeatures; ++f) {
            v += d.reg_weights(k)[f] * rfeat[f];
          }
          const double diff = v - targets[k];
          result.value += sd::smooth_l1(diff);
          const double g = sd::smooth_l1_grad(diff);
          for (int f = 0; f < DetectorSurrogate::kRegFeatures; ++f) {
            drfeat[f] += g * d.reg_weights(k)[f];
          }
        }
        sd::accumulate_window_grad(result.gradient, (i - 1) * P, (j - 1) * P,
                                   DetectorSurrogate::kRegWindow,
                                   DetectorSurrogate::kRegPool, dpx,
                                   drfeat.data());
      }
    }
  }
  return result;
}

/// Ridge least-squares fit of the shared filter and regressors on the
/// synthetic renderer's output. Deterministic per seed; no iterative
/// training involved.
inline DetectorSurrogate fit_surrogate(const GridSpec& grid,
                                       std::uint64_t seed,
                                       int n_scenes = 300) {
  namespace sd = surrogate_detail;
  constexpr int F = DetectorSurrogate::kFeatures;
  constexpr int FR = DetectorSurrogate::kRegFeatures;
  constexpr int R = DetectorSurrogate::kRegOutputs;
  Rng rng(mix_seed(seed, hash_string("fit-surrogate")));

  Eigen::MatrixXd ata_s = Eigen::MatrixXd::Zero(F + 1, F + 1);
  Eigen::VectorXd atb_s = Eigen::VectorXd::Zero(F + 1);
  Eigen::MatrixXd ata_r = Eigen::MatrixXd::Zero(FR + 1, FR + 1);
  Eigen::MatrixXd atb_r = Eigen::MatrixXd::Zero(FR + 1, R);

  Eigen::VectorXd row(F + 1);
  Eigen::VectorXd row_r(FR + 1);
  std::vector<double> feat(F);
  std::vector<double> rfeat(FR);

  for (int scene = 0; scene < n_scenes; ++scene) {
    const int n_cars = 1 + static_cast<int>(rng.uniform_int(4));
    std::vector<DetectedBox3D> boxes;
    for (int c = 0; c < n_cars; ++c) {
      for (int attempt = 0; attempt < 20; ++attempt) {
        DetectedBox3D box;
        box.center.x = rng.uniform(4.0, grid.extent_m - 3.0);
        box.center.y = rng.uniform(-grid.y_max() + 3.0, grid.y_max() - 3.0);
        box.dims = {rng.uniform(3.6, 4.4), rng.uniform(1.6, 1.8),
                    rng.uniform(1.4, 1.6)};
        box.center.z = box.dims.z * 0.5;
        box.yaw = rng.uniform(-0.35, 0.35);
        bool clear = true;
        for (const auto& other : boxes) {
          if ((other.center.xy() - box.center.xy()).norm() < 7.0) clear = false;
        }
        if (!clear) continue;
        boxes.push_back(box);
        break;
      }
    }

    const StereoImagePair img = render_scene(grid, boxes);
    std::vector<int> target(static_cast<size_t>(grid.n_cells()), -1);
    for (size_t li = 0; li < boxes.size(); ++li) {
      const int cell = sd::label_cell(grid, boxes[li]);
      if (cell >= 0) target[cell] = static_cast<int>(li);
    }

    for (int i = 0; i < grid.nx(); ++i) {
      for (int j = 0; j < grid.ny(); ++j) {
        const int cell = i * grid.ny() + j;
        const bool positive = target[cell] >= 0;
        if (!positive && rng.uniform() > 0.12) continue;
        sd::cell_features(grid, img, i, j, feat.data());
        for (int k = 0; k < F; ++k) row[k] = feat[k];
        row[F] = 1.0;
        ata_s.noalias() += row * row.transpose();
        atb_s.noalias() += row * (positive ? 4.0 : -4.0);
        if (positive) {
          const DetectedBox3D& lab = boxes[target[cell]];
          Eigen::RowVectorXd y(R);
          y << lab.center.x - grid.cell_center_x(i),
              lab.center.y - grid.cell_center_y(j), lab.dims.x, lab.dims.y,
              lab.dims.z, lab.yaw;
          sd::reg_features(grid, img, i, j, rfeat.data());
          for (int k = 0; k < FR; ++k) row_r[k] = rfeat[k];
          row_r[FR] = 1.0;
          ata_r.noalias() += row_r * row_r.transpose();
          atb_r.noalias() += row_r * y;
        }
      }
    }
  }

  const double ridge = 1e-3;
  ata_s.diagonal().array() += ridge;
  ata_r.diagonal().array() += ridge;
  const Eigen::VectorXd w_s = ata_s.ldlt().solve(atb_s);
  const Eigen::MatrixXd w_r = ata_r.ldlt().solve(atb_r);

  DetectorSurrogate d;
  d.grid = grid;
  for (int k = 0; k <= F; ++k) d.theta[k] = w_s[k];
  for (int r = 0; r < R; ++r) {
    for (int k = 0; k <= FR; ++k) {
      d.theta[(F + 1) + r * (FR + 1) + k] = w_r(k, r);
    }
  }
  return d;
}

// --- theta serialization: 16-byte header (magic, version, grid spec),
// then the parameter vector as little-endian 64-bit floats. ---

inline void save_theta(const DetectorSurrogate& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  const char magic[4] = {'R', 'S', 'D', 'T'};
  const std::uint32_t version = 1;
  const float cell = static_cast<float>(d.grid.cell_m);
  const float extent = static_cast<float>(d.grid.extent_m);
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&cell), 4);
  out.write(reinterpret_cast<const char*>(&extent), 4);
  out.write(reinterpret_cast<const char*>(d.theta.data()),
            static_cast<std::streamsize>(d.theta.size() * sizeof(double)));
}

inline DetectorSurrogate load_theta(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for read: " + path);
  char magic[4];
  std::uint32_t version = 0;
  float cell = 0.0f, extent = 0.0f;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&cell), 4);
  in.read(reinterpret_cast<char*>(&extent), 4);
  if (!in || std::memcmp(magic, "RSDT", 4) != 0 || version != 1) {
    throw std::runtime_error("bad detector file header: " + path);
  }
  DetectorSurrogate d;
  d.grid.cell_m = cell;
  d.grid.extent_m = extent;
  d.theta.assign(DetectorSurrogate::kParams, 0.0);
  in.read(reinterpret_cast<char*>(d.theta.data()),
          static_cast<std::streamsize>(d.theta.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated detector file: " + path);
  return d;
}

}  // namespace roadsafe

#endif  // ROADSAFE_SURROGATE_HPP_
