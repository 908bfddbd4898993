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

#ifndef MVCAST_TRANSPORT_HPP
#define MVCAST_TRANSPORT_HPP

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "mvcast/detectors.hpp"
#include "mvcast/geometry.hpp"
#include "mvcast/imaging.hpp"
#include "mvcast/session.hpp"

namespace mvcast {

/// 1 to 64 characters from [A-Za-z0-9_-].
[[nodiscard]] bool is_valid_session_id(std::string_view id) noexcept;

/// One full frame as posted by a client.
struct FramePacket {
  std::string session_id;
  Seq seq = 0;
  std::int64_t timestamp_ms = 0;
  std::optional<Quad> quad;
  DetectorKind mode = DetectorKind::kManual;
  std::vector<std::uint8_t> image;  ///< JPEG

  friend bool operator==(const FramePacket&, const FramePacket&) = default;
};

/// The two multipart parts of an ingest request.
struct PacketParts {
  std::string meta;   ///< UTF-8 JSON: session_id, seq, timestamp_ms, quad, mode
  std::string frame;  ///< image bytes
};

[[nodiscard]] PacketParts to_parts(const FramePacket& packet);
/// Throws MalformedPacket on bad JSON, missing fields, a bad session id, or an invalid quad.
[[nodiscard]] FramePacket from_parts(const PacketParts& parts);

/// Renders a complete multipart/form-data body. Returns the body; the
/// matching Content-Type is `multipart/form-data; boundary=<boundary>`.
[[nodiscard]] std::string multipart_body(const PacketParts& parts, std::string_view boundary);

/// Latest result of one session. Immutable once published.
struct PublishedView {
  std::string session_id;
  Seq seq = 0;
  std::int64_t timestamp_ms = 0;
  Quad quad;
  DetectorKind mode = DetectorKind::kManual;
  std::optional<Quad> candidate;
  std::optional<Quad> locked;
  Frame pixels;                        ///< warped output before encoding
  std::vector<std::uint8_t> jpeg;      ///< encoded `pixels`
  std::vector<std::uint8_t> preview;   ///< encoded source frame
  std::chrono::steady_clock::time_point published_at;
};

struct ServerConfig {
  std::string bind_address = "127.0.0.1";
  int port = 8080;  ///< 0 picks a free port
  int quality = kDefaultJpegQuality;
  OutputSpec output;
  SessionConfig session;
  std::optional<std::filesystem::path> ui_dir;  ///< served under /ui/ when set

  void validate() const;
};

struct SessionStats {
  std::size_t accepted = 0;
  std::size_t stale = 0;
  std::size_t malformed = 0;
};

/// Ingest and publish service. The core operations are callable directly;
/// start() exposes them over HTTP:
///
///   POST /ingest/{id}          multipart meta + frame; 200, 409 stale, 400 malformed
///   GET  /view/{id}/latest.jpg warped image with X-Seq and X-Staleness-Ms
///   GET  /view/{id}/meta       JSON: seq, quad, mode, timestamp_ms, candidate, locked
///   GET  /view/{id}/preview.jpg  latest source frame
///   GET  /view/{id}/raw.ppm    warped pixels before encoding
///   POST /control/{id}         one event object; 202 once queued
///   GET  /sessions             JSON list of ids
///
/// Each session keeps a server-side Session that mirrors the client: packet
/// quads become candidates, and control events (applied at the next ingest)
/// can lock or edit. The published quad is the server lock if any, else the
/// packet quad, else the full frame. Face mode publishes an axis-aligned crop.
class Server {
 public:
  using Observer = std::function<void(const PublishedView&)>;

  explicit Server(ServerConfig config = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Throws StaleSeq or MalformedPacket; the session is untouched on error.
  std::shared_ptr<const PublishedView> ingest(const FramePacket& packet);
  /// Throws UnknownSession.
  [[nodiscard]] std::shared_ptr<const PublishedView> latest(const std::string& session_id) const;
  /// Queues an event. Throws UnknownSession.
  void enqueue_control(const std::string& session_id, const Event& event);
  [[nodiscard]] std::vector<std::string> sessions() const;
  /// Throws UnknownSession.
  [[nodiscard]] SessionStats stats(const std::string& session_id) const;
  /// Errors raised by control events, oldest first.
  [[nodiscard]] std::vector<std::string> control_errors(const std::string& session_id) const;

  /// Called synchronously after every publish, from the ingesting thread.
  void set_observer(Observer observer);

  /// Binds and serves on a background thread. Returns the bound port.
  int start();
  /// Binds and serves on the calling thread until stop().
  void run();
  void stop();

  [[nodiscard]] const ServerConfig& config() const noexcept { return config_; }

 private:
  struct SessionSlot;
  struct Http;

  std::shared_ptr<SessionSlot> find(const std::string& session_id) const;
  std::shared_ptr<SessionSlot> find_or_create(const std::string& session_id);
  [[nodiscard]] std::int64_t now_ms() const;
  int bind();

  ServerConfig config_;
  std::chrono::steady_clock::time_point epoch_;
  mutable std::shared_mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<SessionSlot>> sessions_;
  std::mutex observer_mu_;
  Observer observer_;
  std::unique_ptr<Http> http_;
  std::thread thread_;
};

/// `http://host:port` split into parts. Throws InvalidArgument.
struct Endpoint {
  std::string host;
  int port = 80;
};
[[nodiscard]] Endpoint parse_endpoint(std::string_view url);

/// Thin HTTP client for the endpoints above. Transport failures throw ProtocolError.
class Client {
 public:
  explicit Client(Endpoint endpoint);
  ~Client();
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  /// Returns the HTTP status.
  int post_packet(const FramePacket& packet);
  int post_control(const std::string& session_id, const Event& event);
  /// Returns the status and the body.
  std::pair<int, std::string> get(const std::string& path);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mvcast

#endif  // MVCAST_TRANSPORT_HPP
