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

#include "mvcast/imaging.hpp"

#include "mvcast/error.hpp"

namespace mvcast {

Frame Frame::filled(int width, int height, Rgb color) {
  if (width < 0 || height < 0) throw Error(Errc::kInvalidArgument, "negative frame size");
  Frame f;
  f.width = width;
  f.height = height;
  f.pixels.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < f.pixels.size(); i += 3) {
    f.pixels[i] = color.r;
    f.pixels[i + 1] = color.g;
    f.pixels[i + 2] = color.b;
  }
  return f;
}

GrayFrame GrayFrame::filled(int width, int height, std::uint8_t value) {
  if (width < 0 || height < 0) throw Error(Errc::kInvalidArgument, "negative frame size");
  GrayFrame g;
  g.width = width;
  g.height = height;
  g.pixels.assign(static_cast<std::size_t>(width) * height, value);
  return g;
}

bool is_consistent(const Frame& frame) noexcept {
  return frame.width >= 0 && frame.height >= 0 &&
         frame.pixels.size() == static_cast<std::size_t>(frame.width) * frame.height * 3;
}

bool is_consistent(const GrayFrame& gray) noexcept {
  return gray.width >= 0 && gray.height >= 0 && gray.pixels.size() == static_cast<std::size_t>(gray.width) * gray.height;
}

void require_stream_frame(const Frame& frame) {
  if (!is_consistent(frame)) throw Error(Errc::kInvalidArgument, "pixel buffer does not match dimensions");
  if (frame.width < kMinFrameDim || frame.height < kMinFrameDim) {
    throw Error(Errc::kInvalidArgument, "frame smaller than 16x16");
  }
}

std::uint8_t luma(Rgb c) noexcept {
  const unsigned weighted = 299u * c.r + 587u * c.g + 114u * c.b + 500u;
  const unsigned v = weighted / 1000u;
  return static_cast<std::uint8_t>(v > 255u ? 255u : v);
}

GrayFrame to_grayscale(const Frame& frame) {
  GrayFrame g;
  g.width = frame.width;
  g.height = frame.height;
  g.pixels.resize(static_cast<std::size_t>(frame.width) * frame.height);
  for (std::size_t i = 0, j = 0; i < g.pixels.size(); ++i, j += 3) {
    g.pixels[i] = luma({frame.pixels[j], frame.pixels[j + 1], frame.pixels[j + 2]});
  }
  return g;
}

Frame to_rgb(const GrayFrame& gray) {
  Frame f = Frame::filled(gray.width, gray.height);
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) {
    f.pixels[3 * i] = f.pixels[3 * i + 1] = f.pixels[3 * i + 2] = gray.pixels[i];
  }
  return f;
}

}  // namespace mvcast
