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

namespace mvcast {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kEncodeFailure: return "EncodeFailure";
    case Errc::kDecodeFailure: return "DecodeFailure";
    case Errc::kIoError: return "IoError";
    case Errc::kNoDominantLine: return "NoDominantLine";
    case Errc::kParallelLines: return "ParallelLines";
    case Errc::kDegenerateQuad: return "DegenerateQuad";
    case Errc::kSingularSystem: return "SingularSystem";
    case Errc::kEmptyRegion: return "EmptyRegion";
    case Errc::kNoEdges: return "NoEdges";
    case Errc::kTagCountMismatch: return "TagCountMismatch";
    case Errc::kNoBlob: return "NoBlob";
    case Errc::kStaleFrame: return "StaleFrame";
    case Errc::kStaleEvent: return "StaleEvent";
    case Errc::kModeMismatch: return "ModeMismatch";
    case Errc::kNoCandidate: return "NoCandidate";
    case Errc::kInvalidQuadEdit: return "InvalidQuadEdit";
    case Errc::kFlatImage: return "FlatImage";
    case Errc::kStaleSeq: return "StaleSeq";
    case Errc::kMalformedPacket: return "MalformedPacket";
    case Errc::kUnknownSession: return "UnknownSession";
    case Errc::kSpecOutOfBounds: return "SpecOutOfBounds";
    case Errc::kProtocolError: return "ProtocolError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

Error::Error(Errc code) : std::runtime_error(std::string(to_string(code))), code_(code) {}

}  // namespace mvcast
