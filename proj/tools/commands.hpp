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

#ifndef MVCAST_TOOLS_COMMANDS_HPP
#define MVCAST_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mvcast/detectors.hpp"
#include "mvcast/geometry.hpp"
#include "mvcast/imaging.hpp"
#include "mvcast/pipeline.hpp"
#include "mvcast/session.hpp"
#include "mvcast/transport.hpp"

namespace mvcast::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitIo = 2, kExitProtocol = 3 };

/// Maps an error to the CLI exit code.
[[nodiscard]] int exit_code_for(Errc code) noexcept;

/// Settings shared by all subcommands. Precedence: defaults, then the
/// --config file, then environment (serve only), then explicit flags.
struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  int quality = kDefaultJpegQuality;
  OutputSpec output;
  DetectorParams detector;
  SessionConfig session;
  std::string bind_address = "127.0.0.1";
  int port = 8080;
};

/// Reads a JSON config file over `opts`. Throws IoError or InvalidArgument.
void apply_config_file(const std::filesystem::path& path, GlobalOptions& opts);

/// Frames of a directory with an index file, or a single PPM file.
/// Throws IoError when nothing can be read.
[[nodiscard]] std::vector<Frame> load_frames(const std::filesystem::path& input);

struct SynthOptions {
  std::filesystem::path spec;
  std::filesystem::path out;
};
int cmd_synth(const GlobalOptions& g, const SynthOptions& o, std::ostream& out);

struct DetectOptions {
  std::filesystem::path input;
  DetectorKind mode = DetectorKind::kScreen;
  std::optional<std::filesystem::path> candidates;  ///< JSON lines; stdout when unset
  std::optional<std::filesystem::path> overlay_dir;
  std::optional<std::filesystem::path> edge_dir;
  std::optional<Quad> locked;  ///< drawn in red on overlays
  bool truth_report = false;
};
int cmd_detect(const GlobalOptions& g, const DetectOptions& o, std::ostream& out);

struct WarpOptions {
  std::filesystem::path input;
  std::filesystem::path out;
  std::optional<Quad> quad;                      ///< else per-frame quads from truth.jsonl
  std::optional<std::filesystem::path> quads;    ///< JSON lines {seq, quad}
};
int cmd_warp(const GlobalOptions& g, const WarpOptions& o, std::ostream& out);

struct StabilizeOptions {
  std::filesystem::path input;
  int radius = 5;
};
int cmd_stabilize(const GlobalOptions& g, const StabilizeOptions& o, std::ostream& out);

/// Per-frame outcome of a stream replay.
struct StreamRecord {
  Seq seq = 0;
  FrameEffects effects;
  int status = 0;  ///< HTTP status of the post, 0 when not streamed
};

struct StreamOptions {
  std::filesystem::path input;
  std::string server = "http://127.0.0.1:8080";
  std::string session_id = "default";
  std::optional<std::filesystem::path> script;
  /// Frames per second; 0 replays at the recorded timestamps.
  double max_rate = 0.0;
  std::optional<std::filesystem::path> record_dir;
  DetectorKind initial_mode = DetectorKind::kManual;
  /// Called for every frame after it was handled.
  std::function<void(const StreamRecord&)> on_frame;
};
int cmd_stream(const GlobalOptions& g, const StreamOptions& o, std::ostream& out, std::ostream& err);

/// Drives frames and timed events through a SyncPipeline: events with
/// t_ms <= a frame's timestamp are applied before that frame. Streaming is
/// on from the start and detection uses `g.detector`; `handlers.detect` is
/// filled in when empty. Event errors are reported to `err` and skipped.
/// cmd_stream runs this with a network stream handler.
SyncPipeline replay(const GlobalOptions& g, const std::vector<Frame>& frames, const std::vector<TimedEvent>& events,
                    DetectorKind initial_mode, bool record, PipelineHandlers handlers,
                    const std::function<void(const Frame&, const FrameEffects&)>& after_frame, std::ostream& err);

struct ServeOptions {
  std::optional<std::filesystem::path> ui_dir;
};
int cmd_serve(const GlobalOptions& g, const ServeOptions& o, std::ostream& out, std::ostream& err);

/// Full command line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mvcast::cli

#endif  // MVCAST_TOOLS_COMMANDS_HPP
