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

#ifndef MVCAST_GEOMETRY_HPP
#define MVCAST_GEOMETRY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

#include "mvcast/error.hpp"
#include "mvcast/imaging.hpp"

namespace mvcast {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

/// Smallest accepted quad area, in square pixels.
inline constexpr double kMinQuadArea = 64.0;

/// Four corners ordered TL, TR, BR, BL. With y pointing down this order is
/// clockwise on screen, which makes the shoelace area positive.
///
/// Pixel (x, y) is sampled at coordinate (x, y), so the quad covering a whole
/// W x H frame is (0,0),(W,0),(W,H),(0,H).
template <typename Scalar>
struct QuadT {
  std::array<Point2<Scalar>, 4> corners;

  static QuadT rect(Scalar x0, Scalar y0, Scalar x1, Scalar y1) {
    return {{Point2<Scalar>(x0, y0), Point2<Scalar>(x1, y0), Point2<Scalar>(x1, y1), Point2<Scalar>(x0, y1)}};
  }
  static QuadT full_frame(int width, int height) {
    return rect(Scalar(0), Scalar(0), Scalar(width), Scalar(height));
  }

  [[nodiscard]] Point2<Scalar> centroid() const {
    return (corners[0] + corners[1] + corners[2] + corners[3]) / Scalar(4);
  }

  template <typename Other>
  [[nodiscard]] QuadT<Other> cast() const {
    QuadT<Other> q;
    for (std::size_t i = 0; i < 4; ++i) q.corners[i] = corners[i].template cast<Other>();
    return q;
  }

  friend bool operator==(const QuadT& a, const QuadT& b) {
    for (std::size_t i = 0; i < 4; ++i)
      if (a.corners[i] != b.corners[i]) return false;
    return true;
  }
};

using Quad = QuadT<double>;

enum class Corner { kTopLeft = 0, kTopRight = 1, kBottomRight = 2, kBottomLeft = 3 };

/// z-component of (b - a) x (c - b).
template <typename Scalar>
[[nodiscard]] Scalar turn(const Point2<Scalar>& a, const Point2<Scalar>& b, const Point2<Scalar>& c) {
  const Point2<Scalar> u = b - a;
  const Point2<Scalar> v = c - b;
  return u.x() * v.y() - u.y() * v.x();
}

/// Shoelace area; positive for the TL, TR, BR, BL ordering.
template <typename Scalar>
[[nodiscard]] Scalar signed_area(const QuadT<Scalar>& q) {
  Scalar twice(0);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& p = q.corners[i];
    const auto& n = q.corners[(i + 1) % 4];
    twice += p.x() * n.y() - n.x() * p.y();
  }
  return twice / Scalar(2);
}

/// Finite, strictly convex, clockwise (y down) and at least kMinQuadArea.
template <typename Scalar>
[[nodiscard]] bool is_valid_quad(const QuadT<Scalar>& q) {
  for (const auto& c : q.corners)
    if (!c.allFinite()) return false;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!(turn(q.corners[i], q.corners[(i + 1) % 4], q.corners[(i + 2) % 4]) > Scalar(0))) return false;
  }
  return signed_area(q) >= Scalar(kMinQuadArea);
}

template <typename Scalar>
void require_valid_quad(const QuadT<Scalar>& q) {
  if (!is_valid_quad(q)) throw Error(Errc::kDegenerateQuad, "quad is not convex, clockwise and >= 64 px^2");
}

template <typename Scalar>
[[nodiscard]] QuadT<Scalar> translated(QuadT<Scalar> q, const Point2<Scalar>& offset) {
  for (auto& c : q.corners) c += offset;
  return q;
}

/// True when p lies inside or on the boundary of a valid quad.
template <typename Scalar>
[[nodiscard]] bool contains(const QuadT<Scalar>& q, const Point2<Scalar>& p) {
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2<Scalar> e = q.corners[(i + 1) % 4] - q.corners[i];
    const Point2<Scalar> d = p - q.corners[i];
    if (e.x() * d.y() - e.y() * d.x() < Scalar(0)) return false;
  }
  return true;
}

/// Quad scaled by `factor` about its centroid.
template <typename Scalar>
[[nodiscard]] QuadT<Scalar> scaled_about_centroid(QuadT<Scalar> q, Scalar factor) {
  const Point2<Scalar> c = q.centroid();
  for (auto& p : q.corners) p = c + (p - c) * factor;
  return q;
}

struct OutputSpec {
  int out_width = 640;
  int out_height = 480;

  void validate() const {
    if (out_width < kMinFrameDim || out_height < kMinFrameDim) {
      throw Error(Errc::kInvalidArgument, "output dimensions must be >= 16");
    }
  }
  [[nodiscard]] Quad target() const { return Quad::full_frame(out_width, out_height); }
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

template <typename Scalar>
using Homography = Eigen::Matrix<Scalar, 3, 3>;

template <typename Scalar>
[[nodiscard]] Point2<Scalar> apply(const Homography<Scalar>& h, const Point2<Scalar>& p) {
  const Eigen::Matrix<Scalar, 3, 1> q = h * p.homogeneous();
  return q.hnormalized();
}

namespace detail {

// Similarity that moves the centroid to the origin and the mean distance to sqrt(2).
template <typename Scalar>
Homography<Scalar> normalizing_transform(const std::array<Point2<Scalar>, 4>& pts) {
  Point2<Scalar> c = Point2<Scalar>::Zero();
  for (const auto& p : pts) c += p;
  c /= Scalar(4);
  Scalar mean_dist(0);
  for (const auto& p : pts) mean_dist += (p - c).norm();
  mean_dist /= Scalar(4);
  if (!(mean_dist > Scalar(0))) throw Error(Errc::kSingularSystem, "coincident points");
  const Scalar s = std::sqrt(Scalar(2)) / mean_dist;
  Homography<Scalar> t;
  t << s, 0, -s * c.x(), 0, s, -s * c.y(), 0, 0, 1;
  return t;
}

// True when some three of the (normalized) points are collinear.
template <typename Scalar>
bool has_collinear_triple(const std::array<Point2<Scalar>, 4>& pts, const Homography<Scalar>& norm) {
  std::array<Point2<Scalar>, 4> p;
  for (int i = 0; i < 4; ++i) p[i] = apply(norm, pts[i]);
  const Scalar eps = std::sqrt(std::numeric_limits<Scalar>::epsilon());
  for (int skip = 0; skip < 4; ++skip) {
    std::array<Point2<Scalar>, 3> t;
    int n = 0;
    for (int i = 0; i < 4; ++i)
      if (i != skip) t[n++] = p[i];
    const Point2<Scalar> a = t[1] - t[0];
    const Point2<Scalar> b = t[2] - t[0];
    if (std::abs(a.x() * b.y() - a.y() * b.x()) < eps) return true;
  }
  return false;
}

}  // namespace detail

/// Projective map sending src[i] to dst[i] for i = 0..3, normalized so m(2,2) = 1.
///
/// Both point sets are conditioned by a similarity first, then the eight
/// unknowns are found by LU with partial pivoting. Throws SingularSystem when
/// the system is rank-deficient (three collinear points).
template <typename Scalar>
[[nodiscard]] Homography<Scalar> solve_homography(const std::array<Point2<Scalar>, 4>& src,
                                                  const std::array<Point2<Scalar>, 4>& dst) {
  const Homography<Scalar> ts = detail::normalizing_transform(src);
  const Homography<Scalar> td = detail::normalizing_transform(dst);
  if (detail::has_collinear_triple(src, ts) || detail::has_collinear_triple(dst, td)) {
    throw Error(Errc::kSingularSystem, "three of the four points are collinear");
  }

  Eigen::Matrix<Scalar, 8, 8> a;
  Eigen::Matrix<Scalar, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    const Point2<Scalar> p = apply(ts, src[i]);
    const Point2<Scalar> q = apply(td, dst[i]);
    a.row(2 * i) << p.x(), p.y(), 1, 0, 0, 0, -q.x() * p.x(), -q.x() * p.y();
    a.row(2 * i + 1) << 0, 0, 0, p.x(), p.y(), 1, -q.y() * p.x(), -q.y() * p.y();
    b(2 * i) = q.x();
    b(2 * i + 1) = q.y();
  }

  const Eigen::PartialPivLU<Eigen::Matrix<Scalar, 8, 8>> lu(a);
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  if (!(diag.minCoeff() > Scalar(1e-10) * std::max(Scalar(1), diag.maxCoeff()))) {
    throw Error(Errc::kSingularSystem, "rank-deficient correspondence system");
  }
  const Eigen::Matrix<Scalar, 8, 1> x = lu.solve(b);

  Homography<Scalar> hn;
  hn << x(0), x(1), x(2), x(3), x(4), x(5), x(6), x(7), 1;
  Homography<Scalar> h = td.inverse() * hn * ts;
  if (!(std::abs(h(2, 2)) > Scalar(0))) throw Error(Errc::kSingularSystem, "homography maps to infinity");
  h /= h(2, 2);
  if (!(std::abs(h.determinant()) > Scalar(1e-12)) || !h.allFinite()) {
    throw Error(Errc::kSingularSystem, "homography is not invertible");
  }
  return h;
}

/// Map from `src` corners onto the output raster corners (0,0),(W,0),(W,H),(0,H).
template <typename Scalar>
[[nodiscard]] Homography<Scalar> solve_homography(const QuadT<Scalar>& src, const OutputSpec& out) {
  out.validate();
  return solve_homography(src.corners, out.target().template cast<Scalar>().corners);
}

/// Inverse-mapped bilinear warp of `quad` onto the output raster. Samples
/// falling outside the source read as black. Seq and timestamp are copied.
[[nodiscard]] Frame warp_crop(const Frame& frame, const Quad& quad, const OutputSpec& out);

/// Axis-aligned pixel rectangle [x, x + width) x [y, y + height).
struct PixelRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

/// Smallest pixel rectangle enclosing the quad (floor of the minimum, ceil of the maximum).
[[nodiscard]] PixelRect bounding_rect(const Quad& quad);
[[nodiscard]] Quad to_quad(const PixelRect& r);

/// Plain copy of rect ∩ frame. Throws EmptyRegion when they do not intersect.
[[nodiscard]] Frame crop_axis_aligned(const Frame& frame, const PixelRect& rect);

/// Draws the quad outline in place (used for debug overlays).
void draw_quad(Frame& frame, const Quad& quad, Rgb color, int thickness = 2);

}  // namespace mvcast

#endif  // MVCAST_GEOMETRY_HPP
