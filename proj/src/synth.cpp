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

#include "mvcast/synth.hpp"

#include <algorithm>
#include <cmath>

namespace mvcast {
namespace {

constexpr double kInteriorLevel = 225.0;
constexpr double kBackgroundLevel = 50.0;

std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Text-like strokes: 6 px tall lines every 14 px, words made of 12 px blocks
// chosen by hash, 4 px glyphs separated by 2 px gaps.
bool stroke_at(int x, int y, std::uint64_t seed) noexcept {
  const int row = y / 14;
  if (y % 14 < 4 || y % 14 >= 10) return false;
  const int block = x / 12;
  const std::uint64_t h = mix(seed ^ mix(static_cast<std::uint64_t>(row) * 7919u + static_cast<std::uint64_t>(block)));
  return (h & 3u) != 0u && x % 6 < 4;
}

double texture_value(Texture t, double base, double amplitude, int x, int y, std::uint64_t seed) noexcept {
  switch (t) {
    case Texture::kUniform: return base;
    case Texture::kChecker: return ((x / 16 + y / 16) % 2 == 0) ? base - amplitude / 2 : base + amplitude / 2;
    case Texture::kStripes: return stroke_at(x, y, seed) ? base - amplitude : base + amplitude / 4;
  }
  return base;
}

double interior_at(const SceneSpec& s, int x, int y) noexcept {
  // Dark strokes on a bright page keep the mean above 200.
  return texture_value(s.interior, kInteriorLevel, s.interior == Texture::kStripes ? 60.0 : 40.0, x, y, s.seed);
}

double background_at(const SceneSpec& s, int x, int y) noexcept {
  // Strokes here are brighter than their surroundings; the mean stays below 80.
  if (s.background == Texture::kStripes) {
    return stroke_at(x, y, s.seed ^ 0x5bd1e995u) ? kBackgroundLevel + 65.0 : kBackgroundLevel - 15.0;
  }
  return texture_value(s.background, kBackgroundLevel, 40.0, x, y, s.seed ^ 0x5bd1e995u);
}

// Fraction of the unit pixel square around (x, y) inside the quad.
double coverage(const Quad& q, const std::array<Eigen::Vector3d, 4>& edges, int x, int y) noexcept {
  double nearest = 1e9;
  bool outside = false;
  for (const auto& e : edges) {
    const double d = e.x() * x + e.y() * y + e.z();
    nearest = std::min(nearest, d);
    if (d < -0.75) outside = true;
  }
  if (outside) return 0.0;
  if (nearest >= 0.75) return 1.0;
  constexpr int kSub = 4;
  int inside = 0;
  for (int j = 0; j < kSub; ++j) {
    for (int i = 0; i < kSub; ++i) {
      const Point2<double> p(x - 0.5 + (i + 0.5) / kSub, y - 0.5 + (j + 0.5) / kSub);
      if (contains(q, p)) ++inside;
    }
  }
  return static_cast<double>(inside) / (kSub * kSub);
}

// Inward-facing unit normals (a, b, c) with a x + b y + c = signed distance.
std::array<Eigen::Vector3d, 4> edge_lines(const Quad& q) {
  std::array<Eigen::Vector3d, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2<double> a = q.corners[i];
    const Point2<double> d = q.corners[(i + 1) % 4] - a;
    Point2<double> n(-d.y(), d.x());
    n.normalize();
    out[i] = {n.x(), n.y(), -n.dot(a)};
  }
  return out;
}

std::uint8_t to_byte(double v) noexcept { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

bool within_margin(const Quad& q, int w, int h) noexcept {
  return std::all_of(q.corners.begin(), q.corners.end(), [&](const Point2<double>& c) {
    return c.x() >= kSceneMargin && c.y() >= kSceneMargin && c.x() <= w - kSceneMargin && c.y() <= h - kSceneMargin;
  });
}

}  // namespace

std::string_view to_string(Texture t) noexcept {
  switch (t) {
    case Texture::kUniform: return "uniform";
    case Texture::kChecker: return "checker";
    case Texture::kStripes: return "stripes";
  }
  return "uniform";
}

std::optional<Texture> parse_texture(std::string_view name) noexcept {
  if (name == "uniform") return Texture::kUniform;
  if (name == "checker") return Texture::kChecker;
  if (name == "stripes") return Texture::kStripes;
  return std::nullopt;
}

void SceneSpec::validate() const {
  if (width < kMinFrameDim || height < kMinFrameDim) throw Error(Errc::kSpecOutOfBounds, "frame too small");
  if (!(noise_sigma >= 0.0)) throw Error(Errc::kSpecOutOfBounds, "noise_sigma must be >= 0");
  if (!is_valid_quad(true_quad)) throw Error(Errc::kSpecOutOfBounds, "true_quad is not a valid quad");
  if (!within_margin(true_quad, width, height)) throw Error(Errc::kSpecOutOfBounds, "true_quad violates 5 px margin");
}

Scene render_scene(const SceneSpec& spec, int n_frames) {
  spec.validate();
  if (n_frames < 0) throw Error(Errc::kInvalidArgument, "negative frame count");
  Scene scene;
  for (int k = 0; k < n_frames; ++k) {
    const Quad q = translated(spec.true_quad, Point2<double>(spec.drift * k));
    if (!within_margin(q, spec.width, spec.height)) {
      throw Error(Errc::kSpecOutOfBounds, "drift moves the quad outside the margin at frame " + std::to_string(k));
    }
    scene.truth.push_back(q);
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int k = 0; k < n_frames; ++k) {
    const Quad& q = scene.truth[static_cast<std::size_t>(k)];
    const auto edges = edge_lines(q);
    Frame f = Frame::filled(spec.width, spec.height);
    f.seq = static_cast<Seq>(k + 1);
    f.timestamp_ms = k * spec.frame_interval_ms;
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        const double a = coverage(q, edges, x, y);
        double v = (a > 0.0 ? a * interior_at(spec, x, y) : 0.0) + (a < 1.0 ? (1.0 - a) * background_at(spec, x, y) : 0.0);
        if (spec.noise_sigma > 0.0) v += spec.noise_sigma * noise(rng);
        const std::uint8_t g = to_byte(v);
        f.set(x, y, {g, g, g});
      }
    }
    scene.frames.push_back(std::move(f));
  }
  return scene;
}

TagScene render_light_tag_scene(const SceneSpec& spec, std::span<const Point2<double>> tags) {
  if (spec.width < kMinFrameDim || spec.height < kMinFrameDim) throw Error(Errc::kSpecOutOfBounds, "frame too small");
  TagScene out;
  std::vector<Point2<int>> centres;
  for (const auto& t : tags) {
    const Point2<int> c(static_cast<int>(std::lround(t.x())), static_cast<int>(std::lround(t.y())));
    if (c.x() < 1 || c.y() < 1 || c.x() > spec.width - 2 || c.y() > spec.height - 2) {
      throw Error(Errc::kSpecOutOfBounds, "tag outside frame");
    }
    centres.push_back(c);
    out.tags.emplace_back(c.x(), c.y());
  }
  for (std::size_t i = 0; i < centres.size(); ++i) {
    for (std::size_t j = i + 1; j < centres.size(); ++j) {
      const int dx = std::abs(centres[i].x() - centres[j].x());
      const int dy = std::abs(centres[i].y() - centres[j].y());
      // Two 3x3 squares share a pixel or an edge.
      if (dx <= 3 && dy <= 3 && !(dx == 3 && dy == 3)) out.valid = false;
    }
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  out.frame = Frame::filled(spec.width, spec.height);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      double v = background_at(spec, x, y);
      if (spec.noise_sigma > 0.0) v += spec.noise_sigma * noise(rng);
      const std::uint8_t g = to_byte(std::min(v, 200.0));
      out.frame.set(x, y, {g, g, g});
    }
  }
  for (const auto& c : centres)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) out.frame.set(c.x() + dx, c.y() + dy, {255, 255, 255});
  out.frame.seq = 1;
  return out;
}

Quad random_screen_quad(std::mt19937_64& rng, int width, int height) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double cx = width / 2.0 + 0.03 * width * u(rng);
  const double cy = height / 2.0 + 0.03 * height * u(rng);
  const double hw = width * (0.32 + 0.02 * u(rng));
  const double hh = height * (0.32 + 0.02 * u(rng));
  const double jx = 0.04 * width;
  const double jy = 0.05 * height;
  Quad q = Quad::rect(cx - hw, cy - hh, cx + hw, cy + hh);
  for (auto& c : q.corners) c += Point2<double>(jx * u(rng), jy * u(rng));
  return q;
}

std::vector<Point2<double>> random_tag_positions(std::mt19937_64& rng, int width, int height) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Quad q = Quad::rect(0.15 * width, 0.15 * height, 0.85 * width, 0.85 * height);
  std::vector<Point2<double>> out;
  for (const auto& c : q.corners) out.emplace_back(c.x() + 0.08 * width * u(rng), c.y() + 0.08 * height * u(rng));
  return out;
}

}  // namespace mvcast
