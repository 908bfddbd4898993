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

#ifndef MVCAST_SESSION_HPP
#define MVCAST_SESSION_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "mvcast/detectors.hpp"
#include "mvcast/geometry.hpp"
#include "mvcast/imaging.hpp"

namespace mvcast {

using FramePtr = std::shared_ptr<const Frame>;

struct SensorSample {
  Eigen::Vector3d accel = Eigen::Vector3d::Zero();  // m/s^2
  double heading_deg = 0.0;
  std::int64_t timestamp_ms = 0;
};

struct SessionConfig {
  std::int64_t candidate_period_ms = 2000;
  std::int64_t double_tap_window_ms = 300;
  double double_tap_radius_px = 20.0;
  std::int64_t rect_shortcut_window_ms = 1000;
  /// Deviation of acceleration from its running baseline that counts as motion.
  double motion_accel_threshold = 1.5;
  double motion_heading_threshold_deg = 10.0;
  /// Motion stays declared this long after the last threshold crossing.
  std::int64_t motion_window_ms = 500;
  /// Smoothing factor of the acceleration baseline and heading reference.
  double baseline_alpha = 0.1;
  /// A tap inside the inner half of the candidate locks it.
  bool center_tap_lock = false;

  void validate() const;
};

struct Tap {
  Point2<double> point = Point2<double>::Zero();
  std::int64_t time_ms = 0;

  friend bool operator==(const Tap&, const Tap&) = default;
};

struct MotionState {
  bool initialized = false;
  Eigen::Vector3d accel_baseline = Eigen::Vector3d::Zero();
  /// Unit vector of the smoothed compass heading.
  Eigen::Vector2d heading_ref = Eigen::Vector2d::UnitX();
  std::optional<std::int64_t> last_sample_ms;
  std::optional<std::int64_t> last_exceed_ms;
  bool moving = false;

  friend bool operator==(const MotionState&, const MotionState&) = default;
};

struct SessionState {
  int frame_width = 0;
  int frame_height = 0;
  DetectorKind mode = DetectorKind::kManual;
  std::optional<RoiCandidate> candidate;
  /// The candidate that `candidate` replaced, for relock_previous.
  std::optional<RoiCandidate> previous_candidate;
  std::optional<Quad> locked;
  bool detecting = false;
  bool recording = false;
  bool streaming = false;
  std::optional<std::int64_t> last_candidate_time_ms;
  std::vector<Tap> tap_history;
  MotionState motion;
  std::optional<Seq> last_seq;
  /// Timestamp of the latest frame seen.
  std::int64_t clock_ms = 0;

  friend bool operator==(const SessionState&, const SessionState&) = default;
};

/// Busy/idle report of the stream and detect consumers at dispatch time.
struct ConsumerStatus {
  bool stream_idle = true;
  bool detect_idle = true;
};

/// Payload of a Stream effect: the full frame plus the ROI it should be cut to.
struct StreamMeta {
  FramePtr frame;
  std::optional<Quad> quad;
  DetectorKind mode = DetectorKind::kManual;
};

struct FrameEffects {
  bool record = false;
  std::optional<StreamMeta> stream;
  bool detect = false;
};

/// Emitted on lock: show the warped ROI as a thumbnail.
struct ThumbnailEffect {
  Quad quad;
  OutputSpec thumbnail;
};

enum class TapOutcome { kFullFrame, kRectangle, kCenterLock, kCornerMoved };

// Control events, shared by replay scripts and the remote control channel.
struct TapEvent {
  Point2<double> point = Point2<double>::Zero();
};
struct LockEvent {};
struct UnlockEvent {};
struct RelockPreviousEvent {};
struct ModeEvent {
  DetectorKind kind = DetectorKind::kManual;
};
struct SensorEvent {
  Eigen::Vector3d accel = Eigen::Vector3d::Zero();
  double heading_deg = 0.0;
};
struct RecordEvent {
  bool on = false;
};
struct StreamFlagEvent {
  bool on = false;
};

using Event = std::variant<TapEvent, LockEvent, UnlockEvent, RelockPreviousEvent, ModeEvent, SensorEvent, RecordEvent,
                           StreamFlagEvent>;

struct TimedEvent {
  std::int64_t t_ms = 0;
  Event event;
};

/// The interactive ROI state machine. Not thread-safe: one owner applies
/// every event in order (see FramePipeline for the concurrent arrangement).
class Session {
 public:
  Session(int frame_width, int frame_height, SessionConfig config = {}, OutputSpec output = {});

  [[nodiscard]] const SessionState& state() const noexcept { return state_; }
  [[nodiscard]] const SessionConfig& config() const noexcept { return config_; }
  [[nodiscard]] const OutputSpec& output() const noexcept { return output_; }

  /// Decides which consumers get this frame. Throws StaleFrame (state
  /// untouched) unless frame->seq is larger than every seq seen so far.
  FrameEffects on_frame(const FramePtr& frame, std::int64_t now_ms, ConsumerStatus consumers);

  /// Replaces the candidate, keeping any lock. Throws ModeMismatch.
  void on_candidate(const RoiCandidate& candidate);

  /// Locks the candidate and pauses detection until motion. Throws NoCandidate.
  ThumbnailEffect lock();
  void unlock();
  /// Locks the candidate that preceded the current one. Throws NoCandidate.
  ThumbnailEffect relock_previous();

  /// Double tap, then rectangle shortcut, then (optionally) centre-tap lock,
  /// then nearest-corner edit. Throws InvalidArgument for points outside the
  /// frame and StaleEvent for non-increasing times, leaving state unchanged.
  /// Throws InvalidQuadEdit when the edited quad would be invalid; the quad is
  /// kept but the tap is remembered, so it can still open a double tap.
  TapOutcome on_tap(const Point2<double>& point, std::int64_t now_ms);

  /// Updates the motion estimate. Returns true when motion starts. Samples
  /// older than the previous one are dropped.
  bool on_sensor(const SensorSample& sample);

  void set_mode(DetectorKind kind);
  void set_recording(bool on) noexcept { state_.recording = on; }
  void set_streaming(bool on) noexcept { state_.streaming = on; }

  /// Applies a control event at time t_ms; errors propagate.
  void apply(const TimedEvent& event);

  /// Locked quad, else the candidate's, else the whole frame.
  [[nodiscard]] Quad active_quad() const;
  [[nodiscard]] Quad full_frame() const { return Quad::full_frame(state_.frame_width, state_.frame_height); }
  /// Registration against a locked reference makes sense only while locked and still.
  [[nodiscard]] bool stabilization_allowed() const noexcept { return state_.locked && !state_.motion.moving; }

 private:
  void set_locked(const Quad& quad);

  SessionConfig config_;
  OutputSpec output_;
  SessionState state_;
};

/// Nearest corner index (ties go to the lower index: TL, TR, BR, BL).
[[nodiscard]] int nearest_corner(const Quad& quad, const Point2<double>& point) noexcept;

/// Smallest angle between two compass headings, in [0, 180].
[[nodiscard]] double heading_difference(double a_deg, double b_deg) noexcept;

}  // namespace mvcast

#endif  // MVCAST_SESSION_HPP
