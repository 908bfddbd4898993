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

#include "mvcast/session.hpp"

#include <cmath>
#include <numbers>

namespace mvcast {
namespace {

Eigen::Vector2d heading_vector(double deg) {
  const double r = deg * std::numbers::pi / 180.0;
  return {std::cos(r), std::sin(r)};
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void SessionConfig::validate() const {
  if (candidate_period_ms <= 0 || double_tap_window_ms <= 0 || rect_shortcut_window_ms <= 0 || motion_window_ms <= 0 ||
      !(double_tap_radius_px > 0.0) || !(motion_accel_threshold > 0.0) || !(motion_heading_threshold_deg > 0.0) ||
      !(baseline_alpha > 0.0 && baseline_alpha <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "session periods and thresholds must be positive");
  }
}

int nearest_corner(const Quad& quad, const Point2<double>& point) noexcept {
  int best = 0;
  double best_d = (quad.corners[0] - point).squaredNorm();
  for (int i = 1; i < 4; ++i) {
    const double d = (quad.corners[static_cast<std::size_t>(i)] - point).squaredNorm();
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

double heading_difference(double a_deg, double b_deg) noexcept {
  double d = std::fmod(std::abs(a_deg - b_deg), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

Session::Session(int frame_width, int frame_height, SessionConfig config, OutputSpec output)
    : config_(config), output_(output) {
  config_.validate();
  output_.validate();
  if (frame_width < kMinFrameDim || frame_height < kMinFrameDim) {
    throw Error(Errc::kInvalidArgument, "session frame must be at least 16x16");
  }
  state_.frame_width = frame_width;
  state_.frame_height = frame_height;
}

FrameEffects Session::on_frame(const FramePtr& frame, std::int64_t now_ms, ConsumerStatus consumers) {
  if (!frame) throw Error(Errc::kInvalidArgument, "null frame");
  if (state_.last_seq && frame->seq <= *state_.last_seq) {
    throw Error(Errc::kStaleFrame, "seq " + std::to_string(frame->seq) + " after " + std::to_string(*state_.last_seq));
  }
  if (frame->width != state_.frame_width || frame->height != state_.frame_height) {
    throw Error(Errc::kInvalidArgument, "frame size differs from the session's");
  }
  state_.last_seq = frame->seq;
  state_.clock_ms = now_ms;

  FrameEffects fx;
  fx.record = state_.recording;
  if (state_.streaming && consumers.stream_idle) {
    std::optional<Quad> quad;
    if (state_.locked) {
      quad = state_.locked;
    } else if (state_.candidate) {
      quad = state_.candidate->quad;
    }
    fx.stream = StreamMeta{frame, quad, state_.mode};
  }
  const bool due = !state_.candidate || !state_.last_candidate_time_ms ||
                   now_ms - *state_.last_candidate_time_ms >= config_.candidate_period_ms;
  fx.detect = state_.detecting && consumers.detect_idle && due;
  return fx;
}

void Session::on_candidate(const RoiCandidate& candidate) {
  if (state_.mode == DetectorKind::kManual || candidate.source != state_.mode) {
    throw Error(Errc::kModeMismatch, std::string("candidate from ") + std::string(to_string(candidate.source)) +
                                         " in mode " + std::string(to_string(state_.mode)));
  }
  require_valid_quad(candidate.quad);
  if (state_.candidate) state_.previous_candidate = state_.candidate;
  state_.candidate = candidate;
  state_.last_candidate_time_ms = state_.clock_ms;
}

void Session::set_locked(const Quad& quad) {
  state_.locked = quad;
  state_.detecting = false;
}

ThumbnailEffect Session::lock() {
  if (!state_.candidate) throw Error(Errc::kNoCandidate, "nothing to lock");
  set_locked(state_.candidate->quad);
  return {*state_.locked, {std::max(kMinFrameDim, output_.out_width / 4), std::max(kMinFrameDim, output_.out_height / 4)}};
}

void Session::unlock() {
  state_.locked.reset();
  state_.detecting = state_.mode != DetectorKind::kManual;
}

ThumbnailEffect Session::relock_previous() {
  if (!state_.previous_candidate) throw Error(Errc::kNoCandidate, "no previous candidate");
  set_locked(state_.previous_candidate->quad);
  return {*state_.locked, {std::max(kMinFrameDim, output_.out_width / 4), std::max(kMinFrameDim, output_.out_height / 4)}};
}

TapOutcome Session::on_tap(const Point2<double>& point, std::int64_t now_ms) {
  if (!point.allFinite() || point.x() < 0.0 || point.y() < 0.0 || point.x() > state_.frame_width ||
      point.y() > state_.frame_height) {
    throw Error(Errc::kInvalidArgument, "tap outside the frame");
  }
  if (!state_.tap_history.empty() && now_ms <= state_.tap_history.back().time_ms) {
    throw Error(Errc::kStaleEvent, "tap time not increasing");
  }

  const Quad working = active_quad();
  if (!state_.tap_history.empty()) {
    const Tap& prev = state_.tap_history.back();
    const std::int64_t dt = now_ms - prev.time_ms;

    if (dt <= config_.double_tap_window_ms && (point - prev.point).norm() <= config_.double_tap_radius_px) {
      set_locked(full_frame());
      state_.tap_history.clear();
      return TapOutcome::kFullFrame;
    }

    const Point2<double> c = working.centroid();
    const bool prev_upper_left = prev.point.x() < c.x() && prev.point.y() < c.y();
    const bool now_lower_right = point.x() >= c.x() && point.y() >= c.y();
    if (dt <= config_.rect_shortcut_window_ms && prev_upper_left && now_lower_right) {
      const Quad rect = Quad::rect(prev.point.x(), prev.point.y(), point.x(), point.y());
      if (is_valid_quad(rect)) {
        set_locked(rect);
        state_.tap_history.clear();
        return TapOutcome::kRectangle;
      }
    }
  }

  if (config_.center_tap_lock && state_.candidate &&
      contains(scaled_about_centroid(state_.candidate->quad, 0.5), point)) {
    set_locked(state_.candidate->quad);
    state_.tap_history.clear();
    return TapOutcome::kCenterLock;
  }

  state_.tap_history.push_back({point, now_ms});
  if (state_.tap_history.size() > 4) state_.tap_history.erase(state_.tap_history.begin());

  Quad edited = working;
  edited.corners[static_cast<std::size_t>(nearest_corner(working, point))] = point;
  if (!is_valid_quad(edited)) throw Error(Errc::kInvalidQuadEdit, "edit would break convexity or area");
  set_locked(edited);
  return TapOutcome::kCornerMoved;
}

bool Session::on_sensor(const SensorSample& sample) {
  MotionState& m = state_.motion;
  if (!sample.accel.allFinite() || !std::isfinite(sample.heading_deg)) return false;
  if (m.last_sample_ms && sample.timestamp_ms < *m.last_sample_ms) return false;
  m.last_sample_ms = sample.timestamp_ms;

  const Eigen::Vector2d heading = heading_vector(sample.heading_deg);
  if (!m.initialized) {
    m.initialized = true;
    m.accel_baseline = sample.accel;
    m.heading_ref = heading;
    return false;
  }

  const double accel_dev = (sample.accel - m.accel_baseline).norm();
  const double ref_deg = std::atan2(m.heading_ref.y(), m.heading_ref.x()) * 180.0 / std::numbers::pi;
  const double heading_dev = heading_difference(sample.heading_deg, ref_deg);
  if (accel_dev > config_.motion_accel_threshold || heading_dev > config_.motion_heading_threshold_deg) {
    m.last_exceed_ms = sample.timestamp_ms;
  }

  const double a = config_.baseline_alpha;
  m.accel_baseline += a * (sample.accel - m.accel_baseline);
  const Eigen::Vector2d blended = (1.0 - a) * m.heading_ref + a * heading;
  if (blended.norm() > 1e-12) m.heading_ref = blended.normalized();

  const bool moving = m.last_exceed_ms && sample.timestamp_ms - *m.last_exceed_ms <= config_.motion_window_ms;
  const bool started = moving && !m.moving;
  m.moving = moving;
  if (started && state_.locked && state_.mode != DetectorKind::kManual) state_.detecting = true;
  return started;
}

void Session::set_mode(DetectorKind kind) {
  state_.mode = kind;
  state_.candidate.reset();
  state_.previous_candidate.reset();
  state_.last_candidate_time_ms.reset();
  state_.detecting = kind != DetectorKind::kManual;
}

void Session::apply(const TimedEvent& event) {
  std::visit(Overloaded{
                 [&](const TapEvent& e) { on_tap(e.point, event.t_ms); },
                 [&](const LockEvent&) { lock(); },
                 [&](const UnlockEvent&) { unlock(); },
                 [&](const RelockPreviousEvent&) { relock_previous(); },
                 [&](const ModeEvent& e) { set_mode(e.kind); },
                 [&](const SensorEvent& e) { on_sensor({e.accel, e.heading_deg, event.t_ms}); },
                 [&](const RecordEvent& e) { set_recording(e.on); },
                 [&](const StreamFlagEvent& e) { set_streaming(e.on); },
             },
             event.event);
}

Quad Session::active_quad() const {
  if (state_.locked) return *state_.locked;
  if (state_.candidate) return state_.candidate->quad;
  return full_frame();
}

}  // namespace mvcast
