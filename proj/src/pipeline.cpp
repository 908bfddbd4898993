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

#include "mvcast/pipeline.hpp"

namespace mvcast {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::optional<RoiCandidate> run_detect(const PipelineHandlers& h, const Frame& frame) {
  if (!h.detect) return std::nullopt;
  try {
    return h.detect(frame);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

SyncPipeline::SyncPipeline(Session session, PipelineHandlers handlers)
    : session_(std::move(session)), handlers_(std::move(handlers)) {}

FrameEffects SyncPipeline::push_frame(const FramePtr& frame, std::int64_t now_ms) {
  FrameEffects fx = session_.on_frame(frame, now_ms, {});
  if (fx.record) {
    log_.push_back({Consumer::kRecord, frame->seq, frame->seq});
    if (handlers_.record) handlers_.record(*frame);
  }
  if (fx.detect) {
    log_.push_back({Consumer::kDetect, frame->seq, frame->seq});
    if (auto cand = run_detect(handlers_, *frame)) {
      try {
        session_.on_candidate(*cand);
      } catch (const Error&) {
      }
    }
  }
  if (fx.stream) {
    log_.push_back({Consumer::kStream, frame->seq, frame->seq});
    if (handlers_.stream) handlers_.stream(*fx.stream);
  }
  return fx;
}

void SyncPipeline::push_event(const TimedEvent& event) { session_.apply(event); }

FramePipeline::FramePipeline(Session session, PipelineHandlers handlers)
    : session_(std::move(session)), handlers_(std::move(handlers)) {
  for (Worker* w : {&record_, &stream_, &detect_}) w->thread = std::thread([this, w] { worker_loop(*w); });
  owner_ = std::thread([this] { owner_loop(); });
}

FramePipeline::~FramePipeline() {
  wait_idle();
  post(StopMsg{});
  owner_.join();
  for (Worker* w : {&record_, &stream_, &detect_}) {
    {
      std::lock_guard lock(w->mu);
      w->stop = true;
    }
    w->cv.notify_one();
    w->thread.join();
  }
}

void FramePipeline::post(Message msg) {
  {
    std::lock_guard lock(queue_mu_);
    inbox_.push_back(std::move(msg));
    ++outstanding_;
  }
  inbox_cv_.notify_one();
}

void FramePipeline::push_frame(FramePtr frame, std::int64_t now_ms) { post(FrameMsg{std::move(frame), now_ms}); }

void FramePipeline::push_event(TimedEvent event) { post(std::move(event)); }

void FramePipeline::finish_one() {
  bool idle = false;
  {
    std::lock_guard lock(queue_mu_);
    idle = --outstanding_ == 0;
  }
  if (idle) idle_cv_.notify_all();
}

void FramePipeline::wait_idle() {
  std::unique_lock lock(queue_mu_);
  idle_cv_.wait(lock, [this] { return outstanding_ == 0; });
}

void FramePipeline::flush() {
  auto done = std::make_shared<std::promise<void>>();
  auto ready = done->get_future();
  post(FlushMsg{std::move(done)});
  ready.wait();
}

ConsumerStatus FramePipeline::consumers() const {
  std::lock_guard lock(state_mu_);
  return {stream_idle_, detect_idle_};
}

SessionState FramePipeline::snapshot() const {
  std::lock_guard lock(state_mu_);
  return session_.state();
}

std::vector<DispatchRecord> FramePipeline::dispatch_log() const {
  std::lock_guard lock(state_mu_);
  return log_;
}

std::vector<std::string> FramePipeline::errors() const {
  std::lock_guard lock(state_mu_);
  return errors_;
}

void FramePipeline::start_job(Worker& worker, std::function<void()> job) {
  {
    std::lock_guard lock(queue_mu_);
    ++outstanding_;
  }
  {
    std::lock_guard lock(worker.mu);
    worker.jobs.push_back(std::move(job));
  }
  worker.cv.notify_one();
}

void FramePipeline::worker_loop(Worker& worker) {
  for (;;) {
    std::function<void()> job;
    {
      std::unique_lock lock(worker.mu);
      worker.cv.wait(lock, [&] { return worker.stop || !worker.jobs.empty(); });
      if (worker.jobs.empty()) return;
      job = std::move(worker.jobs.front());
      worker.jobs.pop_front();
    }
    job();
    finish_one();
  }
}

void FramePipeline::handle(FrameMsg& msg) {
  // state_mu_ is held by the caller.
  FrameEffects fx;
  try {
    fx = session_.on_frame(msg.frame, msg.now_ms, {stream_idle_, detect_idle_});
  } catch (const Error& e) {
    errors_.emplace_back(e.what());
    return;
  }
  const Seq seq = msg.frame->seq;
  const Seq newest = session_.state().last_seq.value_or(seq);
  FramePtr frame = msg.frame;
  if (fx.record) {
    log_.push_back({Consumer::kRecord, seq, newest});
    start_job(record_, [this, frame] {
      if (handlers_.record) handlers_.record(*frame);
    });
  }
  if (fx.detect) {
    detect_idle_ = false;
    log_.push_back({Consumer::kDetect, seq, newest});
    start_job(detect_, [this, frame] {
      if (auto cand = run_detect(handlers_, *frame)) post(CandidateMsg{*cand});
      post(IdleMsg{Consumer::kDetect});
    });
  }
  if (fx.stream) {
    stream_idle_ = false;
    log_.push_back({Consumer::kStream, seq, newest});
    start_job(stream_, [this, meta = *fx.stream] {
      if (handlers_.stream) {
        try {
          handlers_.stream(meta);
        } catch (const std::exception& e) {
          std::lock_guard lock(state_mu_);
          errors_.emplace_back(e.what());
        }
      }
      post(IdleMsg{Consumer::kStream});
    });
  }
}

void FramePipeline::owner_loop() {
  for (;;) {
    Message msg;
    {
      std::unique_lock lock(queue_mu_);
      inbox_cv_.wait(lock, [this] { return !inbox_.empty(); });
      msg = std::move(inbox_.front());
      inbox_.pop_front();
    }
    if (std::holds_alternative<StopMsg>(msg)) {
      finish_one();
      return;
    }
    {
      std::lock_guard lock(state_mu_);
      try {
        std::visit(Overloaded{
                       [&](FrameMsg& m) { handle(m); },
                       [&](TimedEvent& e) { session_.apply(e); },
                       [&](CandidateMsg& c) { session_.on_candidate(c.candidate); },
                       [&](IdleMsg& i) { (i.consumer == Consumer::kStream ? stream_idle_ : detect_idle_) = true; },
                       [](FlushMsg& f) { f.done->set_value(); },
                       [](StopMsg&) {},
                   },
                   msg);
      } catch (const Error& e) {
        errors_.emplace_back(e.what());
      }
    }
    finish_one();
  }
}

}  // namespace mvcast
