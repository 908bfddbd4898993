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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mvcast/error.hpp"
#include "mvcast/geometry.hpp"
#include "mvcast/synth.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace mvcast;
using mvcast::fixtures::code_of;

namespace {

Frame gradient_frame(int w, int h) {
  Frame f = Frame::filled(w, h, {});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      f.set(x, y, {static_cast<std::uint8_t>(x % 256), static_cast<std::uint8_t>(y % 256),
                   static_cast<std::uint8_t>((x + y) % 256)});
  return f;
}

double max_corner_error(const Homography<double>& h, const Quad& src, const Quad& dst) {
  double worst = 0;
  for (int i = 0; i < 4; ++i) worst = std::max(worst, (apply(h, src.corners[i]) - dst.corners[i]).norm());
  return worst;
}

}  // namespace

TEST(Quad, Invariants) {
  EXPECT_TRUE(is_valid_quad(Quad::rect(0, 0, 10, 10)));
  EXPECT_DOUBLE_EQ(signed_area(Quad::rect(0, 0, 10, 10)), 100.0);
  EXPECT_FALSE(is_valid_quad(Quad::rect(0, 0, 7, 9)));  // 63 px^2
  Quad ccw = Quad::rect(0, 0, 10, 10);
  std::swap(ccw.corners[1], ccw.corners[3]);
  EXPECT_FALSE(is_valid_quad(ccw));
  Quad bowtie = Quad::rect(0, 0, 10, 10);
  std::swap(bowtie.corners[2], bowtie.corners[3]);
  EXPECT_FALSE(is_valid_quad(bowtie));
  Quad reflex{{Point2<double>(0, 0), Point2<double>(20, 0), Point2<double>(5, 5), Point2<double>(0, 20)}};
  EXPECT_FALSE(is_valid_quad(reflex));
  Quad nan = Quad::rect(0, 0, 10, 10);
  nan.corners[0].x() = std::nan("");
  EXPECT_FALSE(is_valid_quad(nan));
  EXPECT_EQ(code_of([&] { require_valid_quad(nan); }), Errc::kDegenerateQuad);
}

TEST(Quad, TranslationPreservesAreaAndContainment) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const Quad q = random_screen_quad(rng, 640, 480);
    const Quad t = translated(q, Point2<double>(3.5, -7.25));
    EXPECT_NEAR(signed_area(t), signed_area(q), 1e-9);
    EXPECT_TRUE(is_valid_quad(t));
    EXPECT_TRUE(contains(q, q.centroid()));
    EXPECT_FALSE(contains(q, Point2<double>(-1, -1)));
  }
}

TEST(Homography, IdentityForFullFrame) {
  const Homography<double> h = solve_homography(Quad::rect(0, 0, 640, 480), OutputSpec{640, 480});
  EXPECT_LT((h - Homography<double>::Identity()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Homography, PureScaling) {
  const Homography<double> h = solve_homography(Quad::rect(0, 0, 320, 240), OutputSpec{640, 480});
  Homography<double> expected = Homography<double>::Identity();
  expected(0, 0) = 2;
  expected(1, 1) = 2;
  EXPECT_LT((h - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(h(2, 2), 1.0);
}

TEST(Homography, RandomQuadsMapCornersExactly) {
  std::mt19937_64 rng(77);
  const OutputSpec out;
  for (int i = 0; i < 100; ++i) {
    const Quad q = random_screen_quad(rng, 640, 480);
    const Homography<double> h = solve_homography(q, out);
    EXPECT_LT(max_corner_error(h, q, out.target()), 1e-6);
    EXPECT_GT(std::abs(h.determinant()), 1e-12);
  }
}

TEST(Homography, FloatScalarAlsoWorks) {
  const QuadT<float> q = Quad::rect(10, 20, 330, 260).cast<float>();
  const Homography<float> h = solve_homography(q, OutputSpec{640, 480});
  EXPECT_LT((apply(h, q.corners[2]) - Point2<float>(640, 480)).norm(), 1e-2f);
}

TEST(Homography, CollinearCornersAreSingular) {
  const std::array<Point2<double>, 4> src{Point2<double>(0, 0), Point2<double>(10, 10), Point2<double>(20, 20),
                                          Point2<double>(0, 30)};
  const auto dst = OutputSpec{}.target().corners;
  EXPECT_EQ(code_of([&] { (void)solve_homography(src, dst); }), Errc::kSingularSystem);
}

TEST(Warp, FullFrameIsIdentity) {
  Frame f = fixtures::random_frame(96, 64, 3);
  f.seq = 9;
  f.timestamp_ms = 77;
  const Frame w = warp_crop(f, Quad::full_frame(96, 64), OutputSpec{96, 64});
  EXPECT_EQ(w, f);
}

TEST(Warp, IntegerCropIsByteExact) {
  const Frame f = fixtures::random_frame(300, 200, 4);
  const Frame w = warp_crop(f, Quad::rect(37, 21, 137, 121), OutputSpec{100, 100});
  EXPECT_EQ(w.pixels, crop_axis_aligned(f, {37, 21, 100, 100}).pixels);
}

TEST(Warp, TwoTimesUpsampleMatchesNearestNeighbour) {
  // Smooth content: bilinear and nearest differ by at most one level.
  const Frame f = gradient_frame(200, 150);
  const Frame w = warp_crop(f, Quad::rect(40, 30, 90, 80), OutputSpec{100, 100});
  const Frame nn = oracle::nn_upsample2(f, 40, 30, 50, 50);
  std::size_t close = 0;
  for (std::size_t i = 0; i < w.pixels.size(); ++i) close += std::abs(int(w.pixels[i]) - int(nn.pixels[i])) <= 1;
  EXPECT_GE(static_cast<double>(close) / static_cast<double>(w.pixels.size()), 0.99);
}

TEST(Warp, OutputHasRequestedSizeAndBlackOutside) {
  const Frame f = Frame::filled(100, 100, {200, 200, 200});
  const Frame w = warp_crop(f, Quad::rect(-50, -50, 50, 50), OutputSpec{40, 30});
  EXPECT_EQ(w.width, 40);
  EXPECT_EQ(w.height, 30);
  EXPECT_EQ(w.at(0, 0).r, 0);
  EXPECT_EQ(w.at(39, 29).r, 200);
}

TEST(Warp, ScaledQuadOnScaledFrameAgrees) {
  // Same scene content at 1x and 2x: warps of corresponding quads agree.
  SceneSpec spec;
  spec.interior = Texture::kChecker;
  const Frame small = render_scene(spec, 1).frames[0];
  const Frame big = oracle::nn_upsample2(small, 0, 0, small.width, small.height);
  const Quad q = Quad::rect(100, 80, 420, 320);
  const Quad q2 = Quad::rect(200, 160, 840, 640);
  const OutputSpec out{320, 240};
  const Frame a = warp_crop(small, q, out);
  const Frame b = warp_crop(big, q2, out);
  std::size_t close = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) close += std::abs(int(a.pixels[i]) - int(b.pixels[i])) <= 1;
  EXPECT_GE(static_cast<double>(close) / static_cast<double>(a.pixels.size()), 0.99);
}

TEST(Crop, FullFrameAndOutside) {
  const Frame f = fixtures::random_frame(50, 40, 2);
  EXPECT_EQ(crop_axis_aligned(f, {0, 0, 50, 40}).pixels, f.pixels);
  EXPECT_EQ(code_of([&] { (void)crop_axis_aligned(f, {60, 0, 10, 10}); }), Errc::kEmptyRegion);
  EXPECT_EQ(code_of([&] { (void)crop_axis_aligned(f, {0, 0, 0, 10}); }), Errc::kEmptyRegion);
}

TEST(Crop, OffsetIndexing) {
  const Frame f = gradient_frame(64, 64);
  const Frame c = crop_axis_aligned(f, {10, 10, 20, 20});
  ASSERT_EQ(c.width, 20);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) EXPECT_EQ(c.at(x, y), f.at(x + 10, y + 10));
  const Frame clipped = crop_axis_aligned(f, {50, -5, 30, 20});
  EXPECT_EQ(clipped.width, 14);
  EXPECT_EQ(clipped.height, 15);
  EXPECT_EQ(clipped.at(0, 0), f.at(50, 0));
}

TEST(BoundingRect, FloorsAndCeils) {
  const Quad q{{Point2<double>(10.2, 5.9), Point2<double>(30.5, 5.1), Point2<double>(31.0, 40.01),
                Point2<double>(9.99, 39.0)}};
  EXPECT_EQ(bounding_rect(q), (PixelRect{9, 5, 22, 36}));
  EXPECT_EQ(to_quad(PixelRect{1, 2, 3, 4}), Quad::rect(1, 2, 4, 6));
}

TEST(DrawQuad, MarksOutline) {
  Frame f = Frame::filled(50, 50, {});
  draw_quad(f, Quad::rect(10, 10, 40, 40), {255, 0, 0}, 1);
  EXPECT_EQ(f.at(25, 10).r, 255);
  EXPECT_EQ(f.at(25, 25).r, 0);
}

TEST(OutputSpec, Validates) {
  EXPECT_EQ(code_of([] { OutputSpec{15, 100}.validate(); }), Errc::kInvalidArgument);
  EXPECT_NO_THROW((OutputSpec{16, 16}.validate()));
}
