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

#include <charconv>

#include "mvcast/error.hpp"
#include "mvcast/json.hpp"
#include "mvcast/transport.hpp"

namespace mvcast {

bool is_valid_session_id(std::string_view id) noexcept {
  if (id.empty() || id.size() > 64) return false;
  for (const char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

PacketParts to_parts(const FramePacket& packet) {
  nlohmann::json meta = {
      {"session_id", packet.session_id},
      {"seq", packet.seq},
      {"timestamp_ms", packet.timestamp_ms},
      {"quad", packet.quad ? quad_to_json(*packet.quad) : nlohmann::json(nullptr)},
      {"mode", std::string(to_string(packet.mode))},
  };
  return {meta.dump(), std::string(packet.image.begin(), packet.image.end())};
}

FramePacket from_parts(const PacketParts& parts) {
  FramePacket p;
  try {
    const auto meta = nlohmann::json::parse(parts.meta);
    p.session_id = meta.at("session_id").get<std::string>();
    if (!meta.at("seq").is_number_unsigned()) throw Error(Errc::kMalformedPacket, "seq must be a non-negative integer");
    p.seq = meta.at("seq").get<Seq>();
    if (!meta.at("timestamp_ms").is_number_integer()) throw Error(Errc::kMalformedPacket, "timestamp_ms must be an integer");
    p.timestamp_ms = meta.at("timestamp_ms").get<std::int64_t>();
    if (const auto it = meta.find("quad"); it != meta.end() && !it->is_null()) p.quad = quad_from_json(*it);
    const auto kind = parse_detector_kind(meta.at("mode").get<std::string>());
    if (!kind) throw Error(Errc::kMalformedPacket, "unknown mode");
    p.mode = *kind;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kMalformedPacket, std::string("meta: ") + e.what());
  } catch (const Error& e) {
    throw Error(Errc::kMalformedPacket, e.what());
  }
  if (!is_valid_session_id(p.session_id)) throw Error(Errc::kMalformedPacket, "bad session id");
  if (parts.frame.empty()) throw Error(Errc::kMalformedPacket, "empty frame part");
  p.image.assign(parts.frame.begin(), parts.frame.end());
  return p;
}

std::string multipart_body(const PacketParts& parts, std::string_view boundary) {
  std::string body;
  body.reserve(parts.meta.size() + parts.frame.size() + 512);
  const auto part = [&](std::string_view name, std::string_view type, std::string_view data, bool file) {
    body += "--";
    body += boundary;
    body += "\r\nContent-Disposition: form-data; name=\"";
    body += name;
    body += file ? "\"; filename=\"frame.jpg\"\r\n" : "\"\r\n";
    body += "Content-Type: ";
    body += type;
    body += "\r\n\r\n";
    body += data;
    body += "\r\n";
  };
  part("meta", "application/json", parts.meta, false);
  part("frame", "image/jpeg", parts.frame, true);
  body += "--";
  body += boundary;
  body += "--\r\n";
  return body;
}

Endpoint parse_endpoint(std::string_view url) {
  constexpr std::string_view scheme = "http://";
  if (url.starts_with(scheme)) url.remove_prefix(scheme.size());
  while (url.ends_with('/')) url.remove_suffix(1);
  const auto colon = url.rfind(':');
  Endpoint e;
  if (colon == std::string_view::npos) {
    e.host = std::string(url);
  } else {
    e.host = std::string(url.substr(0, colon));
    const auto port = url.substr(colon + 1);
    const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), e.port);
    if (ec != std::errc() || ptr != port.data() + port.size() || e.port <= 0 || e.port > 65535) {
      throw Error(Errc::kInvalidArgument, "bad port in " + std::string(url));
    }
  }
  if (e.host.empty() || e.host.find('/') != std::string::npos) {
    throw Error(Errc::kInvalidArgument, "bad server address " + std::string(url));
  }
  return e;
}

}  // namespace mvcast
