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

#include <algorithm>

#include "mvcast/detectors.hpp"

namespace mvcast {

std::vector<Component> label_components(const GrayFrame& gray, int threshold) {
  const int w = gray.width;
  const int h = gray.height;
  std::vector<std::uint8_t> seen(gray.pixels.size(), 0);
  std::vector<Component> out;
  std::vector<std::pair<int, int>> stack;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto idx = static_cast<std::size_t>(y) * w + x;
      if (seen[idx] || gray.pixels[idx] < threshold) continue;

      Component c;
      double sx = 0.0, sy = 0.0;
      int x0 = x, x1 = x, y0 = y, y1 = y;
      seen[idx] = 1;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [px, py] = stack.back();
        stack.pop_back();
        const std::uint8_t v = gray.at(px, py);
        ++c.area;
        c.peak = std::max(c.peak, v);
        sx += px;
        sy += py;
        x0 = std::min(x0, px);
        x1 = std::max(x1, px);
        y0 = std::min(y0, py);
        y1 = std::max(y1, py);
        constexpr int kDx[] = {1, -1, 0, 0};
        constexpr int kDy[] = {0, 0, 1, -1};
        for (int n = 0; n < 4; ++n) {
          const int nx = px + kDx[n];
          const int ny = py + kDy[n];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const auto nidx = static_cast<std::size_t>(ny) * w + nx;
          if (seen[nidx] || gray.pixels[nidx] < threshold) continue;
          seen[nidx] = 1;
          stack.emplace_back(nx, ny);
        }
      }
      c.cx = sx / c.area;
      c.cy = sy / c.area;
      c.bounds = {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace mvcast
