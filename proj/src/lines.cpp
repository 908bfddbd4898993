// Copyright 2026 The mvcast Authors
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

#include "mvcast/lines.hpp"

#include <cmath>

namespace mvcast {

void HoughParams::validate() const {
  if (!(rho_resolution > 0.0) || !(theta_resolution > 0.0)) {
    throw Error(Errc::kInvalidArgument, "Hough resolutions must be positive");
  }
  if (min_votes < 2) throw Error(Errc::kInvalidArgument, "min_votes must be >= 2");
}

int HoughParams::theta_bins() const {
  int n = static_cast<int>(std::ceil(std::numbers::pi / theta_resolution - 1e-9));
  while (n > 1 && (n - 1) * theta_resolution >= std::numbers::pi) --n;
  return std::max(n, 1);
}

Halves partition_halves(std::span<const EdgePoint> points, int width, int height) {
  Halves h;
  for (const auto& p : points) {
    (2 * p.y < height ? h.top : h.bottom).push_back(p);
    (2 * p.x < width ? h.left : h.right).push_back(p);
  }
  return h;
}

bool theta_allowed(int k, const HoughParams& params, Orientation orientation) noexcept {
  // Compare bin indices against the quarter-turn boundaries to avoid
  // floating-point disagreement at exactly 45 and 135 degrees.
  const double quarter = std::numbers::pi / 4.0 / params.theta_resolution;
  const double pos = static_cast<double>(k);
  const bool horizontal = pos >= quarter - 1e-9 && pos <= 3.0 * quarter + 1e-9;
  switch (orientation) {
    case Orientation::kAny: return true;
    case Orientation::kNearHorizontal: return horizontal;
    case Orientation::kNearVertical: return !horizontal;
  }
  return true;
}

Line hough_dominant(std::span<const EdgePoint> points, const HoughParams& params, Orientation orientation) {
  params.validate();
  if (points.empty()) throw Error(Errc::kNoDominantLine, "no points");

  const int n_theta = params.theta_bins();
  std::vector<double> cos_t(n_theta), sin_t(n_theta);
  for (int k = 0; k < n_theta; ++k) {
    cos_t[k] = std::cos(k * params.theta_resolution);
    sin_t[k] = std::sin(k * params.theta_resolution);
  }

  double max_norm = 0.0;
  for (const auto& p : points) max_norm = std::max(max_norm, std::hypot(p.x, p.y));
  const long offset = static_cast<long>(std::ceil(max_norm / params.rho_resolution)) + 1;
  const long n_rho = 2 * offset + 1;

  Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> acc =
      Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>::Zero(n_theta, n_rho);
  std::vector<int> bins;
  for (int k = 0; k < n_theta; ++k)
    if (theta_allowed(k, params, orientation)) bins.push_back(k);

  for (const auto& p : points) {
    for (const int k : bins) {
      const double rho = p.x * cos_t[k] + p.y * sin_t[k];
      acc(k, std::lround(rho / params.rho_resolution) + offset) += 1;
    }
  }

  const int peak = acc.maxCoeff();
  if (peak < params.min_votes) {
    throw Error(Errc::kNoDominantLine, "accumulator peak " + std::to_string(peak) + " below min_votes");
  }

  // Tied bins are visited in (theta, rho) order; a later bin only wins on a
  // strictly smaller residual.
  int best_k = -1;
  long best_r = 0;
  double best_residual = 0.0;
  for (const int k : bins) {
    for (long r = 0; r < n_rho; ++r) {
      if (acc(k, r) != peak) continue;
      const double centre = static_cast<double>(r - offset) * params.rho_resolution;
      double residual = 0.0;
      for (const auto& p : points) {
        const double rho = p.x * cos_t[k] + p.y * sin_t[k];
        if (std::lround(rho / params.rho_resolution) + offset == r) residual += (rho - centre) * (rho - centre);
      }
      if (best_k < 0 || residual_less(residual, best_residual)) {
        best_k = k;
        best_r = r;
        best_residual = residual;
      }
    }
  }
  return {static_cast<double>(best_r - offset) * params.rho_resolution, best_k * params.theta_resolution};
}

Point2<double> intersect(const Line& a, const Line& b) {
  const double ca = std::cos(a.theta), sa = std::sin(a.theta);
  const double cb = std::cos(b.theta), sb = std::sin(b.theta);
  const double det = ca * sb - sa * cb;
  if (std::abs(det) < 1e-6) throw Error(Errc::kParallelLines, "lines are (near) parallel");
  return {(a.rho * sb - b.rho * sa) / det, (ca * b.rho - cb * a.rho) / det};
}

Quad build_quad(const Line& top, const Line& bottom, const Line& left, const Line& right, int width, int height) {
  const Quad q{{intersect(top, left), intersect(top, right), intersect(bottom, right), intersect(bottom, left)}};
  // Small slack so lines meeting exactly on the limit are not rejected by rounding.
  const double mx = 0.1 * width + 1e-9 * width;
  const double my = 0.1 * height + 1e-9 * height;
  for (const auto& c : q.corners) {
    if (c.x() < -mx || c.x() > width + mx || c.y() < -my || c.y() > height + my) {
      throw Error(Errc::kDegenerateQuad, "corner more than 10% outside the frame");
    }
  }
  require_valid_quad(q);
  return q;
}

}  // namespace mvcast
