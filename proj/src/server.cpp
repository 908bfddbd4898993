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

#include <algorithm>
#include <utility>

#include "mvcast/error.hpp"
#include "mvcast/json.hpp"
#include "mvcast/transport.hpp"

// After Eigen: <resolv.h> defines a _res macro that clashes with Eigen internals.
#include "httplib.h"

namespace mvcast {
namespace {

constexpr std::size_t kMaxControlErrors = 64;

int status_for(Errc code) {
  switch (code) {
    case Errc::kStaleSeq:
      return 409;
    case Errc::kMalformedPacket:
      return 400;
    case Errc::kUnknownSession:
      return 404;
    default:
      return 500;
  }
}

void set_error(httplib::Response& res, const Error& e) {
  res.status = status_for(e.code());
  res.set_content(nlohmann::json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump(),
                  "application/json");
}

nlohmann::json optional_quad(const std::optional<Quad>& q) { return q ? quad_to_json(*q) : nlohmann::json(nullptr); }

}  // namespace

void ServerConfig::validate() const {
  if (port < 0 || port > 65535) throw Error(Errc::kInvalidArgument, "port must be in [0, 65535]");
  if (quality < 1 || quality > 100) throw Error(Errc::kInvalidArgument, "quality must be in [1, 100]");
  output.validate();
  session.validate();
}

struct Server::SessionSlot {
  std::mutex mu;  // session, last_seq, control_errors; serializes ingest
  std::optional<Session> session;
  std::optional<Seq> last_seq;
  std::vector<std::string> control_errors;
  SessionStats stats;

  std::mutex inbox_mu;
  std::vector<TimedEvent> inbox;
  std::int64_t last_event_ms = -1;  // event times stay strictly increasing

  mutable std::mutex view_mu;
  std::shared_ptr<const PublishedView> view;

  std::shared_ptr<const PublishedView> load() const {
    std::lock_guard lock(view_mu);
    return view;
  }
  void store(std::shared_ptr<const PublishedView> v) {
    std::lock_guard lock(view_mu);
    view = std::move(v);
  }
};

struct Server::Http {
  httplib::Server svr;
  int port = 0;
};

Server::Server(ServerConfig config) : config_(std::move(config)), epoch_(std::chrono::steady_clock::now()) {
  config_.validate();
}

Server::~Server() { stop(); }

std::int64_t Server::now_ms() const {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - epoch_).count();
}

std::shared_ptr<Server::SessionSlot> Server::find(const std::string& session_id) const {
  std::shared_lock lock(sessions_mu_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(Errc::kUnknownSession, session_id);
  return it->second;
}

std::shared_ptr<Server::SessionSlot> Server::find_or_create(const std::string& session_id) {
  {
    std::shared_lock lock(sessions_mu_);
    if (const auto it = sessions_.find(session_id); it != sessions_.end()) return it->second;
  }
  std::unique_lock lock(sessions_mu_);
  auto& slot = sessions_[session_id];
  if (!slot) slot = std::make_shared<SessionSlot>();
  return slot;
}

std::shared_ptr<const PublishedView> Server::ingest(const FramePacket& packet) {
  if (!is_valid_session_id(packet.session_id)) throw Error(Errc::kMalformedPacket, "bad session id");
  if (packet.quad && !is_valid_quad(*packet.quad)) throw Error(Errc::kMalformedPacket, "invalid quad");

  auto slot = find_or_create(packet.session_id);
  auto frame = std::make_shared<Frame>();
  try {
    *frame = decode_frame(packet.image);
    require_stream_frame(*frame);
  } catch (const Error& e) {
    std::lock_guard lock(slot->mu);
    ++slot->stats.malformed;
    throw Error(Errc::kMalformedPacket, e.what());
  }
  frame->seq = packet.seq;
  frame->timestamp_ms = packet.timestamp_ms;

  std::lock_guard lock(slot->mu);
  if (slot->last_seq && packet.seq <= *slot->last_seq) {
    ++slot->stats.stale;
    throw Error(Errc::kStaleSeq, "seq " + std::to_string(packet.seq) + " not after " + std::to_string(*slot->last_seq));
  }

  // Work on a copy so a failure leaves the session as it was.
  Session session = slot->session && slot->session->state().frame_width == frame->width &&
                            slot->session->state().frame_height == frame->height
                        ? *slot->session
                        : Session(frame->width, frame->height, config_.session, config_.output);
  const std::int64_t now = now_ms();
  session.on_frame(frame, now, {});
  if (session.state().mode != packet.mode) session.set_mode(packet.mode);
  if (packet.quad && packet.mode != DetectorKind::kManual) {
    session.on_candidate({*packet.quad, packet.mode, packet.seq});
  }

  std::vector<TimedEvent> events;
  {
    std::lock_guard inbox_lock(slot->inbox_mu);
    events.swap(slot->inbox);
  }
  std::vector<std::string> errors;
  for (const auto& ev : events) {
    try {
      session.apply(ev);
    } catch (const Error& e) {
      errors.emplace_back(e.what());
    }
  }

  const SessionState& st = session.state();
  const Quad quad = st.locked ? *st.locked : packet.quad ? *packet.quad : session.full_frame();

  auto view = std::make_shared<PublishedView>();
  try {
    view->pixels = packet.mode == DetectorKind::kFace ? crop_axis_aligned(*frame, bounding_rect(quad))
                                                      : warp_crop(*frame, quad, config_.output);
  } catch (const Error& e) {
    ++slot->stats.malformed;
    throw Error(Errc::kMalformedPacket, e.what());
  }
  view->pixels.seq = packet.seq;
  view->pixels.timestamp_ms = packet.timestamp_ms;
  view->session_id = packet.session_id;
  view->seq = packet.seq;
  view->timestamp_ms = packet.timestamp_ms;
  view->quad = quad;
  view->mode = st.mode;
  if (st.candidate) view->candidate = st.candidate->quad;
  view->locked = st.locked;
  view->jpeg = encode_frame(view->pixels, config_.quality);
  view->preview = encode_frame(*frame, config_.quality);
  view->published_at = std::chrono::steady_clock::now();

  slot->session = std::move(session);
  slot->last_seq = packet.seq;
  ++slot->stats.accepted;
  for (auto& e : errors) slot->control_errors.push_back(std::move(e));
  if (slot->control_errors.size() > kMaxControlErrors) {
    slot->control_errors.erase(slot->control_errors.begin(),
                               slot->control_errors.end() - static_cast<std::ptrdiff_t>(kMaxControlErrors));
  }
  slot->store(view);

  Observer observer;
  {
    std::lock_guard obs_lock(observer_mu_);
    observer = observer_;
  }
  if (observer) observer(*view);
  return view;
}

std::shared_ptr<const PublishedView> Server::latest(const std::string& session_id) const {
  auto view = find(session_id)->load();
  if (!view) throw Error(Errc::kUnknownSession, session_id + " has no view yet");
  return view;
}

void Server::enqueue_control(const std::string& session_id, const Event& event) {
  auto slot = find(session_id);
  std::lock_guard lock(slot->inbox_mu);
  slot->last_event_ms = std::max(now_ms(), slot->last_event_ms + 1);
  slot->inbox.push_back({slot->last_event_ms, event});
}

std::vector<std::string> Server::sessions() const {
  std::shared_lock lock(sessions_mu_);
  std::vector<std::string> ids;
  ids.reserve(sessions_.size());
  for (const auto& [id, slot] : sessions_) ids.push_back(id);
  return ids;
}

SessionStats Server::stats(const std::string& session_id) const {
  auto slot = find(session_id);
  std::lock_guard lock(slot->mu);
  return slot->stats;
}

std::vector<std::string> Server::control_errors(const std::string& session_id) const {
  auto slot = find(session_id);
  std::lock_guard lock(slot->mu);
  return slot->control_errors;
}

void Server::set_observer(Observer observer) {
  std::lock_guard lock(observer_mu_);
  observer_ = std::move(observer);
}

int Server::bind() {
  if (http_) throw Error(Errc::kInvalidArgument, "server already started");
  http_ = std::make_unique<Http>();
  auto& svr = http_->svr;

  svr.Post(R"(/ingest/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      if (!req.has_file("meta") || !req.has_file("frame")) {
        throw Error(Errc::kMalformedPacket, "expected multipart parts 'meta' and 'frame'");
      }
      FramePacket packet = from_parts({req.get_file_value("meta").content, req.get_file_value("frame").content});
      if (packet.session_id != req.matches[1].str()) throw Error(Errc::kMalformedPacket, "session id mismatch");
      const auto view = ingest(packet);
      res.set_content(nlohmann::json{{"seq", view->seq}}.dump(), "application/json");
    } catch (const Error& e) {
      set_error(res, e);
    }
  });

  svr.Get(R"(/view/([^/]+)/latest\.jpg)", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto view = latest(req.matches[1].str());
      const auto age = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                             view->published_at);
      res.set_header("X-Seq", std::to_string(view->seq));
      res.set_header("X-Staleness-Ms", std::to_string(age.count()));
      res.set_header("Cache-Control", "no-store");
      res.set_content(std::string(view->jpeg.begin(), view->jpeg.end()), "image/jpeg");
    } catch (const Error& e) {
      set_error(res, e);
    }
  });

  svr.Get(R"(/view/([^/]+)/preview\.jpg)", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto view = latest(req.matches[1].str());
      res.set_header("X-Seq", std::to_string(view->seq));
      res.set_header("Cache-Control", "no-store");
      res.set_content(std::string(view->preview.begin(), view->preview.end()), "image/jpeg");
    } catch (const Error& e) {
      set_error(res, e);
    }
  });

  svr.Get(R"(/view/([^/]+)/raw\.ppm)", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto view = latest(req.matches[1].str());
      const auto bytes = to_ppm(view->pixels);
      res.set_header("X-Seq", std::to_string(view->seq));
      res.set_content(std::string(bytes.begin(), bytes.end()), "image/x-portable-pixmap");
    } catch (const Error& e) {
      set_error(res, e);
    }
  });

  svr.Get(R"(/view/([^/]+)/meta)", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto view = latest(req.matches[1].str());
      const auto age = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                             view->published_at);
      const nlohmann::json j = {
          {"seq", view->seq},
          {"quad", quad_to_json(view->quad)},
          {"mode", std::string(to_string(view->mode))},
          {"timestamp_ms", view->timestamp_ms},
          {"candidate", optional_quad(view->candidate)},
          {"locked", optional_quad(view->locked)},
          {"staleness_ms", age.count()},
          {"width", view->pixels.width},
          {"height", view->pixels.height},
      };
      res.set_header("Cache-Control", "no-store");
      res.set_content(j.dump(), "application/json");
    } catch (const Error& e) {
      set_error(res, e);
    }
  });

  svr.Post(R"(/control/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      Event event;
      try {
        event = event_from_json(nlohmann::json::parse(req.body));
      } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::kMalformedPacket, e.what());
      }
      enqueue_control(req.matches[1].str(), event);
      res.status = 202;
      res.set_content(R"({"queued":true})", "application/json");
    } catch (const Error& e) {
      set_error(res, e);
    }
  });

  svr.Get("/sessions", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(nlohmann::json(sessions()).dump(), "application/json");
  });

  if (config_.ui_dir && !svr.set_mount_point("/ui", config_.ui_dir->string())) {
    throw Error(Errc::kIoError, "cannot serve " + config_.ui_dir->string());
  }

  const int port = config_.port == 0 ? svr.bind_to_any_port(config_.bind_address)
                                     : (svr.bind_to_port(config_.bind_address, config_.port) ? config_.port : -1);
  if (port <= 0) {
    http_.reset();
    throw Error(Errc::kIoError, "cannot bind " + config_.bind_address + ":" + std::to_string(config_.port));
  }
  http_->port = port;
  return port;
}

int Server::start() {
  const int port = bind();
  thread_ = std::thread([this] { http_->svr.listen_after_bind(); });
  http_->svr.wait_until_ready();
  return port;
}

void Server::run() {
  bind();
  http_->svr.listen_after_bind();
}

void Server::stop() {
  if (http_) http_->svr.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace mvcast
