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

#ifndef MVCAST_IMAGING_HPP
#define MVCAST_IMAGING_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mvcast {

using Seq = std::uint64_t;

/// Smallest width/height accepted for frames entering a session or the server.
inline constexpr int kMinFrameDim = 16;
inline constexpr int kDefaultJpegQuality = 80;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major interleaved 8-bit RGB image plus stream metadata.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
  std::int64_t timestamp_ms = 0;
  Seq seq = 0;

  /// Allocates a black frame.
  static Frame filled(int width, int height, Rgb color = {});

  [[nodiscard]] Rgb at(int x, int y) const {
    const auto i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const auto i = (static_cast<std::size_t>(y) * width + x) * 3;
    pixels[i] = c.r;
    pixels[i + 1] = c.g;
    pixels[i + 2] = c.b;
  }
  [[nodiscard]] bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// Row-major 8-bit luma image.
struct GrayFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  static GrayFrame filled(int width, int height, std::uint8_t value = 0);

  [[nodiscard]] std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }

  friend bool operator==(const GrayFrame&, const GrayFrame&) = default;
};

/// True when the buffer size matches the dimensions.
[[nodiscard]] bool is_consistent(const Frame& frame) noexcept;
[[nodiscard]] bool is_consistent(const GrayFrame& gray) noexcept;
/// Consistent and at least kMinFrameDim on both sides; throws InvalidArgument otherwise.
void require_stream_frame(const Frame& frame);

/// BT.601 luma, round half up: (299 R + 587 G + 114 B + 500) / 1000.
[[nodiscard]] std::uint8_t luma(Rgb c) noexcept;
[[nodiscard]] GrayFrame to_grayscale(const Frame& frame);
/// Replicates luma into all three channels.
[[nodiscard]] Frame to_rgb(const GrayFrame& gray);

/// Baseline JPEG. Throws EncodeFailure on empty or inconsistent frames.
[[nodiscard]] std::vector<std::uint8_t> encode_frame(const Frame& frame, int quality = kDefaultJpegQuality);
/// Throws DecodeFailure on malformed, truncated, or empty input. Metadata is left zeroed.
[[nodiscard]] Frame decode_frame(std::span<const std::uint8_t> bytes);

// Binary PPM (P6, maxval 255).
[[nodiscard]] std::vector<std::uint8_t> to_ppm(const Frame& frame);
[[nodiscard]] Frame from_ppm(std::span<const std::uint8_t> bytes);
void write_ppm(const std::filesystem::path& path, const Frame& frame);
[[nodiscard]] Frame read_ppm(const std::filesystem::path& path);

/// One line of a sequence index: `seq timestamp_ms filename`.
struct IndexEntry {
  Seq seq = 0;
  std::int64_t timestamp_ms = 0;
  std::string filename;

  friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

inline constexpr const char* kIndexFileName = "index.txt";

/// Zero-padded frame file name, e.g. `frame_000042.ppm`.
[[nodiscard]] std::string sequence_file_name(Seq seq);
[[nodiscard]] std::vector<IndexEntry> read_index(const std::filesystem::path& dir);
void write_index(const std::filesystem::path& dir, std::span<const IndexEntry> entries);
/// Reads the frame named by `entry` and stamps it with the entry's seq/timestamp.
[[nodiscard]] Frame load_indexed_frame(const std::filesystem::path& dir, const IndexEntry& entry);
/// Writes each frame as a numbered PPM plus the index file. Returns the index.
std::vector<IndexEntry> write_sequence(const std::filesystem::path& dir, std::span<const Frame> frames);

}  // namespace mvcast

#endif  // MVCAST_IMAGING_HPP
