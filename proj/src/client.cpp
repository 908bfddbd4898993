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

#include "mvcast/error.hpp"
#include "mvcast/json.hpp"
#include "mvcast/transport.hpp"

// After Eigen: <resolv.h> defines a _res macro that clashes with Eigen internals.
#include "httplib.h"

namespace mvcast {
namespace {

constexpr std::string_view kBoundary = "mvcast-frame-boundary-7f3a";

}  // namespace

struct Client::Impl {
  explicit Impl(const Endpoint& e) : http(e.host, e.port) {
    http.set_keep_alive(true);
    http.set_connection_timeout(5);
    http.set_read_timeout(30);
  }
  httplib::Client http;
};

Client::Client(Endpoint endpoint) : impl_(std::make_unique<Impl>(endpoint)) {}

Client::~Client() = default;

int Client::post_packet(const FramePacket& packet) {
  const std::string body = multipart_body(to_parts(packet), kBoundary);
  const auto res = impl_->http.Post("/ingest/" + packet.session_id, body,
                                    "multipart/form-data; boundary=" + std::string(kBoundary));
  if (!res) throw Error(Errc::kProtocolError, "ingest: " + httplib::to_string(res.error()));
  return res->status;
}

int Client::post_control(const std::string& session_id, const Event& event) {
  const auto res = impl_->http.Post("/control/" + session_id, event_to_json(event).dump(), "application/json");
  if (!res) throw Error(Errc::kProtocolError, "control: " + httplib::to_string(res.error()));
  return res->status;
}

std::pair<int, std::string> Client::get(const std::string& path) {
  const auto res = impl_->http.Get(path);
  if (!res) throw Error(Errc::kProtocolError, "GET " + path + ": " + httplib::to_string(res.error()));
  return {res->status, res->body};
}

}  // namespace mvcast
