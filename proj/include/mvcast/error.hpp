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

#ifndef MVCAST_ERROR_HPP
#define MVCAST_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace mvcast {

/// Failure categories raised across the library. Each maps one-to-one onto a
/// named failure of some operation, so callers can branch on `code()`.
enum class Errc {
  kInvalidArgument,
  kEncodeFailure,
  kDecodeFailure,
  kIoError,
  kNoDominantLine,
  kParallelLines,
  kDegenerateQuad,
  kSingularSystem,
  kEmptyRegion,
  kNoEdges,
  kTagCountMismatch,
  kNoBlob,
  kStaleFrame,
  kStaleEvent,
  kModeMismatch,
  kNoCandidate,
  kInvalidQuadEdit,
  kFlatImage,
  kStaleSeq,
  kMalformedPacket,
  kUnknownSession,
  kSpecOutOfBounds,
  kProtocolError,
};

[[nodiscard]] std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  explicit Error(Errc code);

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mvcast

#endif  // MVCAST_ERROR_HPP
