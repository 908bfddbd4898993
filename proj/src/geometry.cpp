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

#include "mvcast/geometry.hpp"

namespace mvcast {

Frame warp_crop(const Frame& frame, const Quad& quad, const OutputSpec& out) {
  if (!is_consistent(frame)) throw Error(Errc::kInvalidArgument, "inconsistent frame");
  require_valid_quad(quad);
  const Homography<double> inv = solve_homography(quad, out).inverse();

  Frame result = Frame::filled(out.out_width, out.out_height);
  result.seq = frame.seq;
  result.timestamp_ms = frame.timestamp_ms;

  const int w = frame.width;
  const int h = frame.height;
  const auto tap = [&](int x, int y, int ch) -> double {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0.0;
    return frame.pixels[(static_cast<std::size_t>(y) * w + x) * 3 + ch];
  };

  for (int oy = 0; oy < out.out_height; ++oy) {
    for (int ox = 0; ox < out.out_width; ++ox) {
      const Eigen::Vector3d p = inv * Eigen::Vector3d(ox, oy, 1.0);
      if (!(p.z() > 0.0)) continue;
      const double sx = p.x() / p.z();
      const double sy = p.y() / p.z();
      if (!(sx > -1.0 && sy > -1.0 && sx < w && sy < h)) continue;
      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const double fx = sx - x0;
      const double fy = sy - y0;
      const auto o = (static_cast<std::size_t>(oy) * out.out_width + ox) * 3;
      for (int ch = 0; ch < 3; ++ch) {
        const double top = tap(x0, y0, ch) * (1.0 - fx) + tap(x0 + 1, y0, ch) * fx;
        const double bottom = tap(x0, y0 + 1, ch) * (1.0 - fx) + tap(x0 + 1, y0 + 1, ch) * fx;
        const double v = top * (1.0 - fy) + bottom * fy;
        result.pixels[o + ch] = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      }
    }
  }
  return result;
}

PixelRect bounding_rect(const Quad& quad) {
  double x0 = quad.corners[0].x(), x1 = x0, y0 = quad.corners[0].y(), y1 = y0;
  for (const auto& c : quad.corners) {
    x0 = std::min(x0, c.x());
    x1 = std::max(x1, c.x());
    y0 = std::min(y0, c.y());
    y1 = std::max(y1, c.y());
  }
  const int ix0 = static_cast<int>(std::floor(x0));
  const int iy0 = static_cast<int>(std::floor(y0));
  return {ix0, iy0, static_cast<int>(std::ceil(x1)) - ix0, static_cast<int>(std::ceil(y1)) - iy0};
}

Quad to_quad(const PixelRect& r) { return Quad::rect(r.x, r.y, r.x + r.width, r.y + r.height); }

Frame crop_axis_aligned(const Frame& frame, const PixelRect& rect) {
  if (!is_consistent(frame)) throw Error(Errc::kInvalidArgument, "inconsistent frame");
  const int x0 = std::max(rect.x, 0);
  const int y0 = std::max(rect.y, 0);
  const int x1 = std::min(rect.x + rect.width, frame.width);
  const int y1 = std::min(rect.y + rect.height, frame.height);
  if (rect.width <= 0 || rect.height <= 0 || x1 <= x0 || y1 <= y0) {
    throw Error(Errc::kEmptyRegion, "crop rectangle does not intersect the frame");
  }
  Frame out = Frame::filled(x1 - x0, y1 - y0);
  out.seq = frame.seq;
  out.timestamp_ms = frame.timestamp_ms;
  const auto row_bytes = static_cast<std::size_t>(out.width) * 3;
  for (int y = y0; y < y1; ++y) {
    const auto* src = frame.pixels.data() + (static_cast<std::size_t>(y) * frame.width + x0) * 3;
    std::copy_n(src, row_bytes, out.pixels.data() + static_cast<std::size_t>(y - y0) * row_bytes);
  }
  return out;
}

void draw_quad(Frame& frame, const Quad& quad, Rgb color, int thickness) {
  const int half = std::max(thickness, 1) / 2;
  for (std::size_t i = 0; i < 4; ++i) {
    const Eigen::Vector2d a = quad.corners[i];
    const Eigen::Vector2d b = quad.corners[(i + 1) % 4];
    const int steps = static_cast<int>(std::ceil((b - a).lpNorm<Eigen::Infinity>())) + 1;
    for (int s = 0; s <= steps; ++s) {
      const Eigen::Vector2d p = a + (b - a) * (static_cast<double>(s) / steps);
      const int cx = static_cast<int>(std::lround(p.x()));
      const int cy = static_cast<int>(std::lround(p.y()));
      for (int dy = -half; dy <= half; ++dy)
        for (int dx = -half; dx <= half; ++dx)
          if (frame.contains(cx + dx, cy + dy)) frame.set(cx + dx, cy + dy, color);
    }
  }
}

}  // namespace mvcast
