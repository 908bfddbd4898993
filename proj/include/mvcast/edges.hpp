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

#ifndef MVCAST_EDGES_HPP
#define MVCAST_EDGES_HPP

#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mvcast/imaging.hpp"

namespace mvcast {

/// Dense scalar image plane, indexed (row, col) = (y, x).
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct EdgePoint {
  int x = 0;
  int y = 0;
  double magnitude = 0.0;

  friend bool operator==(const EdgePoint&, const EdgePoint&) = default;
};

struct EdgeParams {
  double gaussian_sigma = 1.4;
  /// Hysteresis thresholds as fractions of the largest gradient magnitude.
  double low_ratio = 0.1;
  double high_ratio = 0.3;
  /// Fraction of the strongest edge pixels kept for line fitting.
  double keep_fraction = 0.05;

  /// Throws InvalidArgument when the thresholds are out of order or out of range.
  void validate() const;
};

/// Gaussian blur with a separable kernel of radius ceil(3 sigma), clamping at the borders.
/// sigma == 0 returns the input unchanged (as doubles).
[[nodiscard]] Plane<double> gaussian_smooth(const GrayFrame& gray, double sigma);

/// Width of the frame border where no edge is reported: the smoothing apron plus one pixel.
[[nodiscard]] int edge_border(double sigma) noexcept;

/// Canny detector: smooth, Sobel, 4-direction non-maximum suppression, hysteresis.
/// Points come out in raster order, each carrying its Sobel magnitude.
[[nodiscard]] std::vector<EdgePoint> canny(const GrayFrame& gray, const EdgeParams& params = {});

/// The ceil(keep_fraction * n) points of largest magnitude; equal magnitudes are
/// ranked by (y, x) ascending. Output is in rank order.
[[nodiscard]] std::vector<EdgePoint> top_fraction(std::span<const EdgePoint> edges, double keep_fraction);

/// Strongest edges for line fitting: top_fraction(edges, keep_fraction), but
/// never fewer than min(n, 2 * (width + height)) points. A convex outline
/// inside the frame is at most one frame perimeter long, so a clean scene
/// whose only edges are that outline keeps all of it.
[[nodiscard]] std::vector<EdgePoint> significant_edges(std::span<const EdgePoint> edges, double keep_fraction,
                                                       int width, int height);

/// Debug dump, one `x y magnitude` line per point.
void write_edge_dump(const std::filesystem::path& path, std::span<const EdgePoint> edges);

}  // namespace mvcast

#endif  // MVCAST_EDGES_HPP
