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

#ifndef MVCAST_TESTS_FIXTURES_HPP
#define MVCAST_TESTS_FIXTURES_HPP

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mvcast/imaging.hpp"

namespace mvcast::fixtures {

/// Uniform random RGB noise.
inline Frame random_frame(int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> byte(0, 255);
  Frame f = Frame::filled(width, height, {0, 0, 0});
  for (auto& p : f.pixels) p = static_cast<std::uint8_t>(byte(rng));
  return f;
}

/// Smooth-ish random texture: blocky noise, so neighbouring offsets stay distinguishable.
inline GrayFrame textured_gray(int width, int height, std::uint64_t seed, int block = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> byte(0, 255);
  const int bw = (width + block - 1) / block;
  const int bh = (height + block - 1) / block;
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(bw) * bh);
  for (auto& c : cells) c = static_cast<std::uint8_t>(byte(rng));
  GrayFrame g = GrayFrame::filled(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) g.at(x, y) = cells[static_cast<std::size_t>(y / block) * bw + x / block];
  return g;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mvcast_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace mvcast::fixtures

#endif  // MVCAST_TESTS_FIXTURES_HPP
