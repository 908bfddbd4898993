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

#ifndef MVCAST_DETECTORS_HPP
#define MVCAST_DETECTORS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "mvcast/edges.hpp"
#include "mvcast/geometry.hpp"
#include "mvcast/lines.hpp"

namespace mvcast {

enum class DetectorKind { kManual, kScreen, kLightTag, kFace };

[[nodiscard]] std::string_view to_string(DetectorKind kind) noexcept;
/// Accepts "manual", "screen", "lighttag", "face" and the CLI alias "stub" (= face).
[[nodiscard]] std::optional<DetectorKind> parse_detector_kind(std::string_view name) noexcept;

struct RoiCandidate {
  Quad quad;
  DetectorKind source = DetectorKind::kScreen;
  Seq frame_seq = 0;

  friend bool operator==(const RoiCandidate&, const RoiCandidate&) = default;
};

struct LightTagParams {
  int brightness_threshold = 240;
  int min_blob_area = 4;
  int max_blob_area = 400;

  void validate() const;
};

/// 4-connected region of pixels at or above a threshold.
struct Component {
  int area = 0;
  std::uint8_t peak = 0;
  double cx = 0.0;
  double cy = 0.0;
  PixelRect bounds;
};

/// Components in raster order of their first pixel.
[[nodiscard]] std::vector<Component> label_components(const GrayFrame& gray, int threshold);

/// Intermediate products of the screen detector, for debugging and dumps.
struct ScreenTrace {
  std::vector<EdgePoint> edges;
  std::vector<EdgePoint> kept;
  std::optional<Line> top, bottom, left, right;
};

/// Canny -> strongest edges -> halves -> one Hough line per side -> corners.
/// Throws NoEdges, NoDominantLine, ParallelLines or DegenerateQuad, all of
/// which mean "no candidate this frame".
[[nodiscard]] RoiCandidate detect_screen(const GrayFrame& gray, const EdgeParams& edge_params = {},
                                         const HoughParams& hough_params = {}, Seq seq = 0,
                                         ScreenTrace* trace = nullptr);

/// Four brightest qualifying blobs, centroids ordered around their mean with
/// the topmost (then leftmost) as TL. Throws TagCountMismatch or DegenerateQuad.
[[nodiscard]] RoiCandidate detect_light_tags(const GrayFrame& gray, const LightTagParams& params = {}, Seq seq = 0);

/// Stand-in for a face detector: bounding box of the largest region with
/// luma >= 200, reported under DetectorKind::kFace. Throws NoBlob.
[[nodiscard]] RoiCandidate detect_stub_blob(const GrayFrame& gray, Seq seq = 0);

struct DetectorParams {
  EdgeParams edges;
  HoughParams hough;
  LightTagParams light_tags;
};

/// Anything mapping a gray frame to a candidate or an Error.
class RoiDetector {
 public:
  virtual ~RoiDetector() = default;
  [[nodiscard]] virtual DetectorKind kind() const noexcept = 0;
  [[nodiscard]] virtual RoiCandidate detect(const GrayFrame& gray, Seq seq) const = 0;
};

/// Built-in detector for `kind`; nullptr for kManual.
[[nodiscard]] std::unique_ptr<RoiDetector> make_detector(DetectorKind kind, const DetectorParams& params = {});

}  // namespace mvcast

#endif  // MVCAST_DETECTORS_HPP
