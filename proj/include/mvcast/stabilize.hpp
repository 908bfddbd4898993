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

#ifndef MVCAST_STABILIZE_HPP
#define MVCAST_STABILIZE_HPP

#include <optional>

#include "mvcast/geometry.hpp"
#include "mvcast/imaging.hpp"

namespace mvcast {

/// Integer translation taking reference coordinates to current ones:
/// current(x + dx, y + dy) ~ reference(x, y).
struct Registration {
  int dx = 0;
  int dy = 0;
  double score = 0.0;  ///< zero-mean NCC in [-1, 1]
};

/// Exhaustive search over [-r, r]^2. Ties go to the smaller |dx|+|dy|, then
/// raster order of (dy, dx). Offsets whose overlap is flat in either frame
/// are skipped; FlatImage if that leaves nothing.
[[nodiscard]] Registration register_translation(const GrayFrame& reference, const GrayFrame& current,
                                                int search_radius);

/// Zero-mean NCC of the two frames under the offset, or nullopt when either
/// overlap has zero variance.
[[nodiscard]] std::optional<double> ncc_at(const GrayFrame& reference, const GrayFrame& current, int dx, int dy);

[[nodiscard]] inline Quad apply_offset(const Quad& quad, const Registration& reg) {
  return translated(quad, Point2<double>(reg.dx, reg.dy));
}

}  // namespace mvcast

#endif  // MVCAST_STABILIZE_HPP
