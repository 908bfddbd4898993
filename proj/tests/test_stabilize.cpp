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

#include <gtest/gtest.h>

#include "mvcast/stabilize.hpp"
#include "test_support.hpp"

using namespace mvcast;
using mvcast::fixtures::code_of;

namespace {

GrayFrame crop(const GrayFrame& g, int x0, int y0, int w, int h) {
  GrayFrame out = GrayFrame::filled(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.at(x, y) = g.at(x0 + x, y0 + y);
  return out;
}

// Reference and current views of one texture with current(x+dx, y+dy) == reference(x, y).
std::pair<GrayFrame, GrayFrame> shifted_pair(int dx, int dy, std::uint64_t seed = 3) {
  const GrayFrame big = mvcast::fixtures::textured_gray(96, 80, seed);
  return {crop(big, 12, 12, 64, 48), crop(big, 12 - dx, 12 - dy, 64, 48)};
}

}  // namespace

TEST(Stabilize, IdenticalFramesGiveZero) {
  const GrayFrame g = mvcast::fixtures::textured_gray(64, 48, 1);
  const Registration r = register_translation(g, g, 4);
  EXPECT_EQ(r.dx, 0);
  EXPECT_EQ(r.dy, 0);
  EXPECT_NEAR(r.score, 1.0, 1e-12);
}

TEST(Stabilize, RecoversKnownShift) {
  const auto [ref, cur] = shifted_pair(3, -2);
  const Registration r = register_translation(ref, cur, 5);
  EXPECT_EQ(r.dx, 3);
  EXPECT_EQ(r.dy, -2);
  EXPECT_NEAR(r.score, 1.0, 1e-9);
  const Registration back = register_translation(cur, ref, 5);
  EXPECT_EQ(back.dx, -3);
  EXPECT_EQ(back.dy, 2);
}

TEST(Stabilize, EveryShiftInRange) {
  for (int dy = -5; dy <= 5; ++dy)
    for (int dx = -5; dx <= 5; ++dx) {
      const auto [ref, cur] = shifted_pair(dx, dy, static_cast<std::uint64_t>(100 + dx * 11 + dy));
      const Registration r = register_translation(ref, cur, 6);
      EXPECT_EQ(r.dx, dx) << dx << "," << dy;
      EXPECT_EQ(r.dy, dy) << dx << "," << dy;
    }
}

TEST(Stabilize, FlatAndBadInput) {
  const GrayFrame flat = GrayFrame::filled(32, 32, 128);
  const GrayFrame tex = mvcast::fixtures::textured_gray(32, 32, 2);
  EXPECT_EQ(code_of([&] { (void)register_translation(flat, flat, 3); }), Errc::kFlatImage);
  EXPECT_EQ(code_of([&] { (void)register_translation(tex, flat, 3); }), Errc::kFlatImage);
  EXPECT_FALSE(ncc_at(flat, tex, 0, 0));
  EXPECT_EQ(code_of([&] { (void)register_translation(tex, mvcast::fixtures::textured_gray(32, 30, 2), 3); }),
            Errc::kInvalidArgument);
  EXPECT_EQ(code_of([&] { (void)register_translation(tex, tex, 0); }), Errc::kInvalidArgument);
  EXPECT_EQ(code_of([&] { (void)register_translation(tex, tex, 32); }), Errc::kInvalidArgument);
}

TEST(Stabilize, NccIsBoundedAndSymmetricUnderNegation) {
  const auto [ref, cur] = shifted_pair(2, 1);
  for (int dy = -3; dy <= 3; ++dy)
    for (int dx = -3; dx <= 3; ++dx) {
      const auto s = ncc_at(ref, cur, dx, dy);
      ASSERT_TRUE(s);
      EXPECT_LE(std::abs(*s), 1.0 + 1e-12);
      EXPECT_NEAR(*s, *ncc_at(cur, ref, -dx, -dy), 1e-12);
    }
  EXPECT_NEAR(*ncc_at(ref, cur, 2, 1), 1.0, 1e-12);
}

TEST(Stabilize, ApplyOffsetTranslatesQuad) {
  const Quad q{{Point2<double>(10, 10), Point2<double>(50, 12), Point2<double>(48, 40), Point2<double>(9, 38)}};
  const Quad moved = apply_offset(q, {3, -2, 0.9});
  EXPECT_EQ(moved.corners[0], Point2<double>(13, 8));
  EXPECT_EQ(moved.corners[2], Point2<double>(51, 38));
  EXPECT_DOUBLE_EQ(signed_area(moved), signed_area(q));
  EXPECT_EQ(apply_offset(q, {}), q);
}
