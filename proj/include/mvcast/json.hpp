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

#ifndef MVCAST_JSON_HPP
#define MVCAST_JSON_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mvcast/detectors.hpp"
#include "mvcast/geometry.hpp"
#include "mvcast/session.hpp"

namespace mvcast {

/// `[[x,y],[x,y],[x,y],[x,y]]` in TL, TR, BR, BL order.
[[nodiscard]] nlohmann::json quad_to_json(const Quad& quad);
/// Throws MalformedPacket on shape errors and DegenerateQuad on invalid corners.
[[nodiscard]] Quad quad_from_json(const nlohmann::json& j);
[[nodiscard]] Quad parse_quad(std::string_view text);

/// Event object, e.g. `{"type":"tap","x":12,"y":8}`.
[[nodiscard]] nlohmann::json event_to_json(const Event& event);
/// Throws MalformedPacket.
[[nodiscard]] Event event_from_json(const nlohmann::json& j);

/// Script line `{"t_ms": 1200, "event": {...}}`.
[[nodiscard]] nlohmann::json timed_event_to_json(const TimedEvent& event);
[[nodiscard]] TimedEvent timed_event_from_json(const nlohmann::json& j);

/// JSON-lines event script; blank lines are skipped. Throws MalformedPacket
/// (naming the line) or IoError.
[[nodiscard]] std::vector<TimedEvent> read_event_script(const std::filesystem::path& path);
[[nodiscard]] std::vector<TimedEvent> parse_event_script(std::string_view text);

}  // namespace mvcast

#endif  // MVCAST_JSON_HPP
