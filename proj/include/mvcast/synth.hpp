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

#ifndef MVCAST_SYNTH_HPP
#define MVCAST_SYNTH_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "mvcast/geometry.hpp"

namespace mvcast {

enum class Texture {
  kUniform,
  kChecker,
  /// Rows of short dark/bright strokes, like text on a desktop.
  kStripes,
};

[[nodiscard]] std::string_view to_string(Texture t) noexcept;
[[nodiscard]] std::optional<Texture> parse_texture(std::string_view name) noexcept;

/// Synthetic "screen in a room" scene: a bright quad on a darker background.
struct SceneSpec {
  int width = 640;
  int height = 480;
  Quad true_quad = Quad::rect(120, 90, 520, 390);
  Texture interior = Texture::kUniform;
  Texture background = Texture::kUniform;
  double noise_sigma = 0.0;
  /// Per-frame translation of the quad, pixels.
  Point2<double> drift = Point2<double>::Zero();
  std::uint64_t seed = 0;
  std::int64_t frame_interval_ms = 33;

  /// Throws SpecOutOfBounds unless the quad is valid and keeps a 5 px margin.
  void validate() const;
};

inline constexpr double kSceneMargin = 5.0;

struct Scene {
  std::vector<Frame> frames;
  /// Ground-truth quad of each frame.
  std::vector<Quad> truth;
};

/// Frame k shows true_quad shifted by k * drift. Seq starts at 1 and
/// timestamps advance by frame_interval_ms from 0. Byte-identical for equal
/// spec and seed.
[[nodiscard]] Scene render_scene(const SceneSpec& spec, int n_frames);

struct TagScene {
  Frame frame;
  /// Tag centres as rendered (rounded to the pixel grid).
  std::vector<Point2<double>> tags;
  /// False when two tags touch and would merge into one blob.
  bool valid = true;
};

/// Background of `spec` with a saturated 3x3 blob centred on each position.
[[nodiscard]] TagScene render_light_tag_scene(const SceneSpec& spec, std::span<const Point2<double>> tags);

/// Roughly centred, perspective-distorted quad covering about 40% of the frame.
[[nodiscard]] Quad random_screen_quad(std::mt19937_64& rng, int width, int height);

/// Four tag positions near the corners of a jittered rectangle.
[[nodiscard]] std::vector<Point2<double>> random_tag_positions(std::mt19937_64& rng, int width, int height);

}  // namespace mvcast

#endif  // MVCAST_SYNTH_HPP
