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

#ifndef MVCAST_LINES_HPP
#define MVCAST_LINES_HPP

#include <numbers>
#include <span>
#include <vector>

#include "mvcast/edges.hpp"
#include "mvcast/geometry.hpp"

namespace mvcast {

/// Normal form: x cos(theta) + y sin(theta) = rho, theta in [0, pi).
struct Line {
  double rho = 0.0;
  double theta = 0.0;

  /// Signed distance of (x, y) from the line.
  [[nodiscard]] double residual(double x, double y) const {
    return x * std::cos(theta) + y * std::sin(theta) - rho;
  }
  friend bool operator==(const Line&, const Line&) = default;
};

/// Restricts which theta bins take part in a Hough fit.
enum class Orientation {
  kAny,
  /// theta in [pi/4, 3pi/4]: lines within 45 degrees of horizontal.
  kNearHorizontal,
  /// theta in [0, pi/4) or (3pi/4, pi): lines within 45 degrees of vertical.
  kNearVertical,
};

struct HoughParams {
  double rho_resolution = 1.0;
  double theta_resolution = std::numbers::pi / 180.0;
  int min_votes = 8;

  void validate() const;
  /// Number of theta bins covering [0, pi).
  [[nodiscard]] int theta_bins() const;
};

struct Halves {
  std::vector<EdgePoint> top;
  std::vector<EdgePoint> bottom;
  std::vector<EdgePoint> left;
  std::vector<EdgePoint> right;
};

/// Splits points by frame halves; a point on the midline goes to bottom/right.
/// Every point lands in exactly one of top/bottom and one of left/right.
[[nodiscard]] Halves partition_halves(std::span<const EdgePoint> points, int width, int height);

/// Peak of the (rho, theta) vote accumulator, returned as the bin-centre line.
///
/// Bin k of theta is centred on k * theta_resolution. Each point votes once
/// per theta bin, in the rho bin nearest x cos + y sin (halves round away from
/// zero). Among bins with the most votes the one whose voters sit closest to
/// its centre line (least sum of squared residuals) wins; remaining ties go to
/// the smaller theta, then the smaller rho. Throws NoDominantLine if the peak
/// has fewer than min_votes votes or the input is empty.
[[nodiscard]] Line hough_dominant(std::span<const EdgePoint> points, const HoughParams& params = {},
                                  Orientation orientation = Orientation::kAny);

/// Whether theta bin `k` participates under `orientation`.
[[nodiscard]] bool theta_allowed(int k, const HoughParams& params, Orientation orientation) noexcept;

/// Throws ParallelLines when |sin(theta1 - theta2)| < 1e-6.
[[nodiscard]] Point2<double> intersect(const Line& a, const Line& b);

/// Corners TL = top∩left, TR = top∩right, BR = bottom∩right, BL = bottom∩left.
/// Corners may sit up to 10% of the frame size outside it. Throws ParallelLines
/// or DegenerateQuad.
[[nodiscard]] Quad build_quad(const Line& top, const Line& bottom, const Line& left, const Line& right, int width,
                              int height);

/// Residual ties closer than this are treated as equal by hough_dominant.
[[nodiscard]] inline bool residual_less(double a, double b) noexcept {
  return a < b - 1e-9 * (1.0 + std::max(a, b));
}

}  // namespace mvcast

#endif  // MVCAST_LINES_HPP
