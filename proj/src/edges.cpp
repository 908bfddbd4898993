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

#include "mvcast/edges.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "mvcast/error.hpp"

namespace mvcast {
namespace {

int kernel_radius(double sigma) noexcept { return sigma > 0.0 ? static_cast<int>(std::ceil(3.0 * sigma)) : 0; }

Eigen::ArrayXd gaussian_kernel(double sigma) {
  const int r = kernel_radius(sigma);
  Eigen::ArrayXd k(2 * r + 1);
  for (int i = -r; i <= r; ++i) k[i + r] = std::exp(-(i * i) / (2.0 * sigma * sigma));
  return k / k.sum();
}

// Ranking used by top_fraction: larger magnitude first, then raster order.
bool ranks_before(const EdgePoint& a, const EdgePoint& b) noexcept {
  if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
  if (a.y != b.y) return a.y < b.y;
  return a.x < b.x;
}

}  // namespace

void EdgeParams::validate() const {
  if (!(gaussian_sigma >= 0.0)) throw Error(Errc::kInvalidArgument, "gaussian_sigma must be >= 0");
  if (!(low_ratio > 0.0 && low_ratio < high_ratio && high_ratio <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "need 0 < low_ratio < high_ratio <= 1");
  }
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "keep_fraction must be in (0, 1]");
  }
}

Plane<double> gaussian_smooth(const GrayFrame& gray, double sigma) {
  const int w = gray.width;
  const int h = gray.height;
  Plane<double> src(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) src(y, x) = gray.at(x, y);
  if (sigma <= 0.0 || w == 0 || h == 0) return src;

  const Eigen::ArrayXd k = gaussian_kernel(sigma);
  const int r = kernel_radius(sigma);

  Plane<double> tmp(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * src(y, std::clamp(x + i, 0, w - 1));
      tmp(y, x) = acc;
    }
  }
  Plane<double> out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * tmp(std::clamp(y + i, 0, h - 1), x);
      out(y, x) = acc;
    }
  }
  return out;
}

int edge_border(double sigma) noexcept { return kernel_radius(sigma) + 1; }

std::vector<EdgePoint> canny(const GrayFrame& gray, const EdgeParams& params) {
  params.validate();
  const int w = gray.width;
  const int h = gray.height;
  const int border = edge_border(params.gaussian_sigma);
  if (w <= 2 * border || h <= 2 * border) return {};

  const Plane<double> s = gaussian_smooth(gray, params.gaussian_sigma);

  // Gradients are evaluated one pixel beyond the reporting region so that
  // non-maximum suppression always has both neighbours.
  Plane<double> mag = Plane<double>::Zero(h, w);
  Plane<double> gx = Plane<double>::Zero(h, w);
  Plane<double> gy = Plane<double>::Zero(h, w);
  const int g0 = border - 1;
  double max_mag = 0.0;
  for (int y = g0; y < h - g0; ++y) {
    for (int x = g0; x < w - g0; ++x) {
      const double dx = (s(y - 1, x + 1) + 2.0 * s(y, x + 1) + s(y + 1, x + 1)) -
                        (s(y - 1, x - 1) + 2.0 * s(y, x - 1) + s(y + 1, x - 1));
      const double dy = (s(y + 1, x - 1) + 2.0 * s(y + 1, x) + s(y + 1, x + 1)) -
                        (s(y - 1, x - 1) + 2.0 * s(y - 1, x) + s(y - 1, x + 1));
      gx(y, x) = dx;
      gy(y, x) = dy;
      mag(y, x) = std::hypot(dx, dy);
      if (y >= border && y < h - border && x >= border && x < w - border) max_mag = std::max(max_mag, mag(y, x));
    }
  }
  if (max_mag <= 0.0) return {};

  const double low = params.low_ratio * max_mag;
  const double high = params.high_ratio * max_mag;

  // 0 = suppressed, 1 = weak, 2 = strong.
  Plane<std::uint8_t> cls = Plane<std::uint8_t>::Zero(h, w);
  std::vector<std::pair<int, int>> stack;
  for (int y = border; y < h - border; ++y) {
    for (int x = border; x < w - border; ++x) {
      const double m = mag(y, x);
      if (m < low) continue;
      double angle = std::atan2(gy(y, x), gx(y, x)) * 180.0 / M_PI;
      if (angle < 0.0) angle += 180.0;
      int ox = 1;
      int oy = 0;
      if (angle >= 22.5 && angle < 67.5) {
        ox = 1; oy = 1;
      } else if (angle >= 67.5 && angle < 112.5) {
        ox = 0; oy = 1;
      } else if (angle >= 112.5 && angle < 157.5) {
        ox = -1; oy = 1;
      }
      // Asymmetric comparison keeps exactly one pixel of a symmetric ridge.
      if (!(m >= mag(y + oy, x + ox) && m > mag(y - oy, x - ox))) continue;
      if (m >= high) {
        cls(y, x) = 2;
        stack.emplace_back(x, y);
      } else {
        cls(y, x) = 1;
      }
    }
  }

  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    for (int ny = y - 1; ny <= y + 1; ++ny) {
      for (int nx = x - 1; nx <= x + 1; ++nx) {
        if (cls(ny, nx) == 1) {
          cls(ny, nx) = 2;
          stack.emplace_back(nx, ny);
        }
      }
    }
  }

  std::vector<EdgePoint> out;
  for (int y = border; y < h - border; ++y)
    for (int x = border; x < w - border; ++x)
      if (cls(y, x) == 2) out.push_back({x, y, mag(y, x)});
  return out;
}

std::vector<EdgePoint> top_fraction(std::span<const EdgePoint> edges, double keep_fraction) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "keep_fraction must be in (0, 1]");
  }
  if (edges.empty()) return {};
  // Guard against 0.05 * 100 evaluating to 5.000000000000001.
  const double exact = keep_fraction * static_cast<double>(edges.size());
  auto keep = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  keep = std::clamp<std::size_t>(keep, 1, edges.size());

  std::vector<EdgePoint> out(edges.begin(), edges.end());
  std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(keep), out.end(), ranks_before);
  out.resize(keep);
  return out;
}

std::vector<EdgePoint> significant_edges(std::span<const EdgePoint> edges, double keep_fraction, int width,
                                         int height) {
  if (edges.empty()) return {};
  const auto n = edges.size();
  const auto floor = std::min<std::size_t>(n, 2 * static_cast<std::size_t>(std::max(width, 0) + std::max(height, 0)));
  std::vector<EdgePoint> kept = top_fraction(edges, keep_fraction);
  if (kept.size() >= floor) return kept;
  kept.assign(edges.begin(), edges.end());
  std::partial_sort(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(floor), kept.end(), ranks_before);
  kept.resize(floor);
  return kept;
}

void write_edge_dump(const std::filesystem::path& path, std::span<const EdgePoint> edges) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::kIoError, "cannot write " + path.string());
  out.precision(10);
  for (const auto& e : edges) out << e.x << ' ' << e.y << ' ' << e.magnitude << '\n';
}

}  // namespace mvcast
