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

#include "mvcast/detectors.hpp"

#include <algorithm>
#include <cmath>

namespace mvcast {

std::string_view to_string(DetectorKind kind) noexcept {
  switch (kind) {
    case DetectorKind::kManual: return "manual";
    case DetectorKind::kScreen: return "screen";
    case DetectorKind::kLightTag: return "lighttag";
    case DetectorKind::kFace: return "face";
  }
  return "manual";
}

std::optional<DetectorKind> parse_detector_kind(std::string_view name) noexcept {
  if (name == "manual") return DetectorKind::kManual;
  if (name == "screen") return DetectorKind::kScreen;
  if (name == "lighttag") return DetectorKind::kLightTag;
  if (name == "face" || name == "stub") return DetectorKind::kFace;
  return std::nullopt;
}

void LightTagParams::validate() const {
  if (brightness_threshold <= 0 || brightness_threshold > 255) {
    throw Error(Errc::kInvalidArgument, "brightness_threshold must be in (0, 255]");
  }
  if (min_blob_area <= 0 || min_blob_area > max_blob_area) {
    throw Error(Errc::kInvalidArgument, "need 0 < min_blob_area <= max_blob_area");
  }
}

RoiCandidate detect_screen(const GrayFrame& gray, const EdgeParams& edge_params, const HoughParams& hough_params,
                           Seq seq, ScreenTrace* trace) {
  hough_params.validate();
  std::vector<EdgePoint> edges = canny(gray, edge_params);
  if (edges.empty()) throw Error(Errc::kNoEdges, "no edges in frame");
  std::vector<EdgePoint> kept = significant_edges(edges, edge_params.keep_fraction, gray.width, gray.height);
  const Halves halves = partition_halves(kept, gray.width, gray.height);
  if (trace) {
    trace->edges = std::move(edges);
    trace->kept = kept;
  }

  // Each half only proposes lines of its side's orientation, so the long
  // horizontal edges cannot win the left and right halves (and vice versa).
  const Line top = hough_dominant(halves.top, hough_params, Orientation::kNearHorizontal);
  const Line bottom = hough_dominant(halves.bottom, hough_params, Orientation::kNearHorizontal);
  const Line left = hough_dominant(halves.left, hough_params, Orientation::kNearVertical);
  const Line right = hough_dominant(halves.right, hough_params, Orientation::kNearVertical);
  if (trace) {
    trace->top = top;
    trace->bottom = bottom;
    trace->left = left;
    trace->right = right;
  }
  return {build_quad(top, bottom, left, right, gray.width, gray.height), DetectorKind::kScreen, seq};
}

RoiCandidate detect_light_tags(const GrayFrame& gray, const LightTagParams& params, Seq seq) {
  params.validate();
  std::vector<Component> blobs = label_components(gray, params.brightness_threshold);
  std::erase_if(blobs, [&](const Component& c) {
    return c.area < params.min_blob_area || c.area > params.max_blob_area;
  });
  if (blobs.size() < 4) {
    throw Error(Errc::kTagCountMismatch, "found " + std::to_string(blobs.size()) + " tags, need 4");
  }
  std::stable_sort(blobs.begin(), blobs.end(), [](const Component& a, const Component& b) {
    if (a.peak != b.peak) return a.peak > b.peak;
    if (a.area != b.area) return a.area > b.area;
    if (a.cy != b.cy) return a.cy < b.cy;
    return a.cx < b.cx;
  });
  blobs.resize(4);

  Point2<double> mean = Point2<double>::Zero();
  for (const auto& b : blobs) mean += Point2<double>(b.cx, b.cy);
  mean /= 4.0;

  std::array<Point2<double>, 4> pts;
  for (std::size_t i = 0; i < 4; ++i) pts[i] = {blobs[i].cx, blobs[i].cy};
  // Increasing atan2 with y down sweeps clockwise on screen.
  std::sort(pts.begin(), pts.end(), [&](const Point2<double>& a, const Point2<double>& b) {
    return std::atan2(a.y() - mean.y(), a.x() - mean.x()) < std::atan2(b.y() - mean.y(), b.x() - mean.x());
  });
  const auto tl = std::min_element(pts.begin(), pts.end(), [](const Point2<double>& a, const Point2<double>& b) {
    return a.y() != b.y() ? a.y() < b.y() : a.x() < b.x();
  });
  std::rotate(pts.begin(), tl, pts.end());

  Quad q{pts};
  require_valid_quad(q);
  return {q, DetectorKind::kLightTag, seq};
}

RoiCandidate detect_stub_blob(const GrayFrame& gray, Seq seq) {
  const std::vector<Component> blobs = label_components(gray, 200);
  if (blobs.empty()) throw Error(Errc::kNoBlob, "no pixel with luma >= 200");
  // max_element keeps the first of equal areas, i.e. raster order.
  const auto largest = std::max_element(blobs.begin(), blobs.end(),
                                        [](const Component& a, const Component& b) { return a.area < b.area; });
  Quad q = to_quad(largest->bounds);
  require_valid_quad(q);
  return {q, DetectorKind::kFace, seq};
}

namespace {

class ScreenDetector final : public RoiDetector {
 public:
  explicit ScreenDetector(const DetectorParams& p) : edges_(p.edges), hough_(p.hough) {}
  DetectorKind kind() const noexcept override { return DetectorKind::kScreen; }
  RoiCandidate detect(const GrayFrame& gray, Seq seq) const override { return detect_screen(gray, edges_, hough_, seq); }

 private:
  EdgeParams edges_;
  HoughParams hough_;
};

class LightTagDetector final : public RoiDetector {
 public:
  explicit LightTagDetector(const LightTagParams& p) : params_(p) {}
  DetectorKind kind() const noexcept override { return DetectorKind::kLightTag; }
  RoiCandidate detect(const GrayFrame& gray, Seq seq) const override { return detect_light_tags(gray, params_, seq); }

 private:
  LightTagParams params_;
};

class StubFaceDetector final : public RoiDetector {
 public:
  DetectorKind kind() const noexcept override { return DetectorKind::kFace; }
  RoiCandidate detect(const GrayFrame& gray, Seq seq) const override { return detect_stub_blob(gray, seq); }
};

}  // namespace

std::unique_ptr<RoiDetector> make_detector(DetectorKind kind, const DetectorParams& params) {
  switch (kind) {
    case DetectorKind::kScreen: return std::make_unique<ScreenDetector>(params);
    case DetectorKind::kLightTag: return std::make_unique<LightTagDetector>(params.light_tags);
    case DetectorKind::kFace: return std::make_unique<StubFaceDetector>();
    case DetectorKind::kManual: return nullptr;
  }
  return nullptr;
}

}  // namespace mvcast
