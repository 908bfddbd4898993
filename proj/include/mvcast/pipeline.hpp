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

#ifndef MVCAST_PIPELINE_HPP
#define MVCAST_PIPELINE_HPP

#include <condition_variable>
#include <deque>
#include <future>
#include <memory>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "mvcast/session.hpp"

namespace mvcast {

enum class Consumer { kRecord, kStream, kDetect };

/// One frame handed to one consumer. `newest_seq` is the newest frame the
/// session had seen at that moment.
struct DispatchRecord {
  Consumer consumer = Consumer::kRecord;
  Seq seq = 0;
  Seq newest_seq = 0;

  friend bool operator==(const DispatchRecord&, const DispatchRecord&) = default;
};

struct PipelineHandlers {
  std::function<void(const Frame&)> record;
  std::function<void(const StreamMeta&)> stream;
  /// Returns a candidate or nothing; exceptions count as nothing.
  std::function<std::optional<RoiCandidate>(const Frame&)> detect;
};

/// Runs every consumer inline: consumers are always idle at dispatch, so the
/// outcome depends only on the input order. Used for deterministic replay.
class SyncPipeline {
 public:
  SyncPipeline(Session session, PipelineHandlers handlers);

  /// Returns the effects that were executed. Throws StaleFrame.
  FrameEffects push_frame(const FramePtr& frame, std::int64_t now_ms);
  /// Errors from the session are rethrown.
  void push_event(const TimedEvent& event);

  [[nodiscard]] const Session& session() const noexcept { return session_; }
  [[nodiscard]] const std::vector<DispatchRecord>& dispatch_log() const noexcept { return log_; }

 private:
  Session session_;
  PipelineHandlers handlers_;
  std::vector<DispatchRecord> log_;
};

/// The live arrangement: one owner thread applies frames, control events and
/// detector results to the session in arrival order; record, stream and
/// detect run on their own threads and report back through the same inbox.
/// A busy stream or detect worker simply misses frames (latest wins).
class FramePipeline {
 public:
  FramePipeline(Session session, PipelineHandlers handlers);
  ~FramePipeline();
  FramePipeline(const FramePipeline&) = delete;
  FramePipeline& operator=(const FramePipeline&) = delete;

  void push_frame(FramePtr frame, std::int64_t now_ms);
  void push_event(TimedEvent event);

  /// Blocks until every queued message and every started job has finished.
  void wait_idle();
  /// Blocks until the owner has handled everything pushed before this call.
  /// Unlike wait_idle() it does not wait for consumers.
  void flush();

  /// Which consumers the owner currently considers idle.
  [[nodiscard]] ConsumerStatus consumers() const;

  [[nodiscard]] SessionState snapshot() const;
  [[nodiscard]] std::vector<DispatchRecord> dispatch_log() const;
  /// Messages of events and frames the session rejected.
  [[nodiscard]] std::vector<std::string> errors() const;

 private:
  struct FrameMsg {
    FramePtr frame;
    std::int64_t now_ms;
  };
  struct CandidateMsg {
    RoiCandidate candidate;
  };
  struct IdleMsg {
    Consumer consumer;
  };
  struct FlushMsg {
    std::shared_ptr<std::promise<void>> done;
  };
  struct StopMsg {};
  using Message = std::variant<FrameMsg, TimedEvent, CandidateMsg, IdleMsg, FlushMsg, StopMsg>;

  struct Worker {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<std::function<void()>> jobs;
    bool stop = false;
    std::thread thread;
  };

  void post(Message msg);
  void owner_loop();
  void handle(FrameMsg& msg);
  void start_job(Worker& worker, std::function<void()> job);
  void worker_loop(Worker& worker);
  void finish_one();

  Session session_;
  PipelineHandlers handlers_;

  // Lock order: state_mu_ before queue_mu_.
  mutable std::mutex state_mu_;  // session_, idle flags, log_, errors_
  std::mutex queue_mu_;          // inbox_, outstanding_
  std::condition_variable inbox_cv_;
  std::condition_variable idle_cv_;
  std::deque<Message> inbox_;
  std::size_t outstanding_ = 0;
  bool stream_idle_ = true;
  bool detect_idle_ = true;
  std::vector<DispatchRecord> log_;
  std::vector<std::string> errors_;

  Worker record_;
  Worker stream_;
  Worker detect_;
  std::thread owner_;
};

}  // namespace mvcast

#endif  // MVCAST_PIPELINE_HPP
