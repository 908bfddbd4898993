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

#include <fstream>
#include <sstream>

#include "mvcast/json.hpp"

namespace mvcast {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::kMalformedPacket, what); }

double number_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) malformed(std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

bool bool_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_boolean()) malformed(std::string("missing boolean field '") + key + "'");
  return j.at(key).get<bool>();
}

}  // namespace

nlohmann::json quad_to_json(const Quad& quad) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : quad.corners) out.push_back({c.x(), c.y()});
  return out;
}

Quad quad_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4) malformed("quad must be an array of four [x,y] pairs");
  Quad q;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& p = j[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      malformed("quad corner must be [x,y]");
    }
    q.corners[i] = {p[0].get<double>(), p[1].get<double>()};
  }
  require_valid_quad(q);
  return q;
}

Quad parse_quad(std::string_view text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) malformed("quad is not valid JSON");
  return quad_from_json(j);
}

nlohmann::json event_to_json(const Event& event) {
  return std::visit(
      Overloaded{
          [](const TapEvent& e) -> nlohmann::json { return {{"type", "tap"}, {"x", e.point.x()}, {"y", e.point.y()}}; },
          [](const LockEvent&) -> nlohmann::json { return {{"type", "lock"}}; },
          [](const UnlockEvent&) -> nlohmann::json { return {{"type", "unlock"}}; },
          [](const RelockPreviousEvent&) -> nlohmann::json { return {{"type", "relock_previous"}}; },
          [](const ModeEvent& e) -> nlohmann::json { return {{"type", "mode"}, {"kind", to_string(e.kind)}}; },
          [](const SensorEvent& e) -> nlohmann::json {
            return {{"type", "sensor"}, {"accel", {e.accel.x(), e.accel.y(), e.accel.z()}}, {"heading", e.heading_deg}};
          },
          [](const RecordEvent& e) -> nlohmann::json { return {{"type", "record"}, {"on", e.on}}; },
          [](const StreamFlagEvent& e) -> nlohmann::json { return {{"type", "streamflag"}, {"on", e.on}}; },
      },
      event);
}

Event event_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) malformed("event needs a string 'type'");
  const auto type = j.at("type").get<std::string>();
  if (type == "tap") return TapEvent{{number_field(j, "x"), number_field(j, "y")}};
  if (type == "lock") return LockEvent{};
  if (type == "unlock") return UnlockEvent{};
  if (type == "relock_previous") return RelockPreviousEvent{};
  if (type == "mode") {
    if (!j.contains("kind") || !j.at("kind").is_string()) malformed("mode event needs 'kind'");
    const auto kind = parse_detector_kind(j.at("kind").get<std::string>());
    if (!kind) malformed("unknown mode kind");
    return ModeEvent{*kind};
  }
  if (type == "sensor") {
    const auto& a = j.contains("accel") ? j.at("accel") : nlohmann::json();
    if (!a.is_array() || a.size() != 3 || !a[0].is_number() || !a[1].is_number() || !a[2].is_number()) {
      malformed("sensor event needs accel [x,y,z]");
    }
    return SensorEvent{{a[0].get<double>(), a[1].get<double>(), a[2].get<double>()}, number_field(j, "heading")};
  }
  if (type == "record") return RecordEvent{bool_field(j, "on")};
  if (type == "streamflag") return StreamFlagEvent{bool_field(j, "on")};
  malformed("unknown event type '" + type + "'");
}

nlohmann::json timed_event_to_json(const TimedEvent& event) {
  return {{"t_ms", event.t_ms}, {"event", event_to_json(event.event)}};
}

TimedEvent timed_event_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("t_ms") || !j.at("t_ms").is_number_integer() || !j.contains("event")) {
    malformed("script line needs integer 't_ms' and 'event'");
  }
  return {j.at("t_ms").get<std::int64_t>(), event_from_json(j.at("event"))};
}

std::vector<TimedEvent> parse_event_script(std::string_view text) {
  std::vector<TimedEvent> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) malformed("script line " + std::to_string(line_no) + " is not JSON");
    try {
      out.push_back(timed_event_from_json(j));
    } catch (const Error& e) {
      malformed("script line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TimedEvent> read_event_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIoError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_event_script(buf.str());
}

}  // namespace mvcast
