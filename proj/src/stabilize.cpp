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

#include "mvcast/stabilize.hpp"

#include <cmath>
#include <algorithm>
#include <cstdlib>

#include <Eigen/Core>

#include "mvcast/error.hpp"

namespace mvcast {
namespace {

using Map = Eigen::Map<const Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

Map view(const GrayFrame& g) { return Map(g.pixels.data(), g.height, g.width); }

bool better(double score, int dx, int dy, const Registration& best) {
  const double tol = 1e-12;
  if (score > best.score + tol) return true;
  if (score < best.score - tol) return false;
  const int l1 = std::abs(dx) + std::abs(dy);
  const int best_l1 = std::abs(best.dx) + std::abs(best.dy);
  if (l1 != best_l1) return l1 < best_l1;
  return dy < best.dy || (dy == best.dy && dx < best.dx);
}

}  // namespace

std::optional<double> ncc_at(const GrayFrame& reference, const GrayFrame& current, int dx, int dy) {
  const int w = reference.width - std::abs(dx);
  const int h = reference.height - std::abs(dy);
  if (w <= 0 || h <= 0) return std::nullopt;
  const int rx = std::max(0, -dx);
  const int ry = std::max(0, -dy);
  const Eigen::ArrayXXd a = view(reference).block(ry, rx, h, w).cast<double>();
  const Eigen::ArrayXXd b = view(current).block(ry + dy, rx + dx, h, w).cast<double>();
  const Eigen::ArrayXXd za = a - a.mean();
  const Eigen::ArrayXXd zb = b - b.mean();
  const double va = za.square().sum();
  const double vb = zb.square().sum();
  if (va <= 0.0 || vb <= 0.0) return std::nullopt;
  return std::clamp((za * zb).sum() / std::sqrt(va * vb), -1.0, 1.0);
}

Registration register_translation(const GrayFrame& reference, const GrayFrame& current, int search_radius) {
  if (!is_consistent(reference) || !is_consistent(current) || reference.width != current.width ||
      reference.height != current.height)
    throw Error(Errc::kInvalidArgument, "frames must be valid and of equal size");
  if (search_radius < 1 || search_radius >= std::min(reference.width, reference.height))
    throw Error(Errc::kInvalidArgument, "search radius must be in [1, min(width, height))");

  std::optional<Registration> best;
  for (int dy = -search_radius; dy <= search_radius; ++dy) {
    for (int dx = -search_radius; dx <= search_radius; ++dx) {
      const auto score = ncc_at(reference, current, dx, dy);
      if (!score) continue;
      if (!best || better(*score, dx, dy, *best)) best = Registration{dx, dy, *score};
    }
  }
  if (!best) throw Error(Errc::kFlatImage, "no offset with textured overlap");
  return *best;
}

}  // namespace mvcast
