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

#include "commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mvcast/edges.hpp"
#include "mvcast/error.hpp"
#include "mvcast/json.hpp"
#include "mvcast/stabilize.hpp"
#include "mvcast/synth.hpp"

namespace mvcast::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kTruthFileName = "truth.jsonl";
constexpr Rgb kYellow{255, 255, 0};
constexpr Rgb kRed{255, 0, 0};

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIoError, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidArgument, path.string() + ": " + e.what());
  }
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(Errc::kIoError, "cannot write " + path.string());
  return out;
}

template <class T>
void read_field(const json& j, const char* key, T& value) {
  if (const auto it = j.find(key); it != j.end()) value = it->get<T>();
}

/// Per-seq quads from a JSON-lines file of `{seq, quad}` objects.
std::map<Seq, Quad> read_quads(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIoError, "cannot read " + path.string());
  std::map<Seq, Quad> quads;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      if (j.contains("quad") && !j["quad"].is_null()) quads[j.at("seq").get<Seq>()] = quad_from_json(j["quad"]);
    } catch (const std::exception& e) {
      throw Error(Errc::kIoError, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return quads;
}

double corner_rms(const Quad& a, const Quad& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) sum += (a.corners[i] - b.corners[i]).squaredNorm();
  return std::sqrt(sum / 4.0);
}

std::unique_ptr<RoiDetector> detector_for(DetectorKind kind, const GlobalOptions& g) {
  auto det = make_detector(kind, g.detector);
  if (!det) throw Error(Errc::kInvalidArgument, "manual mode has no detector");
  return det;
}

std::atomic<bool> g_stop_requested{false};

extern "C" void handle_stop_signal(int) { g_stop_requested.store(true); }

}  // namespace

namespace {

// A quad given on the command line; bad values are usage errors.
Quad quad_arg(const std::string& text) {
  try {
    return parse_quad(text);
  } catch (const Error& e) {
    throw Error(Errc::kInvalidArgument, std::string("bad quad argument: ") + e.what());
  }
}

}  // namespace

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::kIoError:
    case Errc::kDecodeFailure:
    case Errc::kEncodeFailure:
      return kExitIo;
    case Errc::kProtocolError:
    case Errc::kStaleSeq:
    case Errc::kMalformedPacket:
    case Errc::kUnknownSession:
      return kExitProtocol;
    default:
      return kExitUsage;
  }
}

void apply_config_file(const fs::path& path, GlobalOptions& opts) {
  const json j = read_json_file(path);
  try {
    if (const auto it = j.find("edges"); it != j.end()) {
      read_field(*it, "sigma", opts.detector.edges.gaussian_sigma);
      read_field(*it, "low", opts.detector.edges.low_ratio);
      read_field(*it, "high", opts.detector.edges.high_ratio);
      read_field(*it, "keep", opts.detector.edges.keep_fraction);
    }
    if (const auto it = j.find("hough"); it != j.end()) {
      read_field(*it, "rho", opts.detector.hough.rho_resolution);
      if (it->contains("theta_deg")) {
        opts.detector.hough.theta_resolution = (*it)["theta_deg"].get<double>() * std::numbers::pi / 180.0;
      }
      read_field(*it, "min_votes", opts.detector.hough.min_votes);
    }
    if (const auto it = j.find("light_tags"); it != j.end()) {
      read_field(*it, "threshold", opts.detector.light_tags.brightness_threshold);
      read_field(*it, "min_area", opts.detector.light_tags.min_blob_area);
      read_field(*it, "max_area", opts.detector.light_tags.max_blob_area);
    }
    if (const auto it = j.find("session"); it != j.end()) {
      SessionConfig& s = opts.session;
      read_field(*it, "candidate_period_ms", s.candidate_period_ms);
      read_field(*it, "double_tap_window_ms", s.double_tap_window_ms);
      read_field(*it, "double_tap_radius_px", s.double_tap_radius_px);
      read_field(*it, "rect_shortcut_window_ms", s.rect_shortcut_window_ms);
      read_field(*it, "motion_accel_threshold", s.motion_accel_threshold);
      read_field(*it, "motion_heading_threshold_deg", s.motion_heading_threshold_deg);
      read_field(*it, "motion_window_ms", s.motion_window_ms);
      read_field(*it, "baseline_alpha", s.baseline_alpha);
      read_field(*it, "center_tap_lock", s.center_tap_lock);
    }
    if (const auto it = j.find("output"); it != j.end()) {
      read_field(*it, "width", opts.output.out_width);
      read_field(*it, "height", opts.output.out_height);
    }
    if (const auto it = j.find("server"); it != j.end()) {
      read_field(*it, "bind", opts.bind_address);
      read_field(*it, "port", opts.port);
    }
    read_field(j, "quality", opts.quality);
    if (j.contains("seed")) opts.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidArgument, path.string() + ": " + e.what());
  }
}

std::vector<Frame> load_frames(const fs::path& input) {
  std::vector<Frame> frames;
  if (fs::is_regular_file(input)) {
    frames.push_back(read_ppm(input));
    frames.back().seq = 1;
    return frames;
  }
  if (!fs::is_directory(input)) throw Error(Errc::kIoError, "no such input: " + input.string());
  for (const auto& entry : read_index(input)) frames.push_back(load_indexed_frame(input, entry));
  if (frames.empty()) throw Error(Errc::kIoError, "no frames in " + input.string());
  return frames;
}

int cmd_synth(const GlobalOptions& g, const SynthOptions& o, std::ostream& out) {
  const json j = read_json_file(o.spec);
  SceneSpec spec;
  int n_frames = 1;
  std::vector<Point2<double>> tags;
  bool has_tags = false;
  try {
    read_field(j, "width", spec.width);
    read_field(j, "height", spec.height);
    if (j.contains("quad")) spec.true_quad = quad_from_json(j["quad"]);
    const auto texture = [&](const char* key, Texture& t) {
      if (!j.contains(key)) return;
      const auto name = j[key].get<std::string>();
      const auto parsed = parse_texture(name);
      if (!parsed) throw Error(Errc::kInvalidArgument, "unknown texture '" + name + "'");
      t = *parsed;
    };
    texture("interior", spec.interior);
    texture("background", spec.background);
    read_field(j, "noise_sigma", spec.noise_sigma);
    if (j.contains("drift")) spec.drift = {j["drift"].at(0).get<double>(), j["drift"].at(1).get<double>()};
    read_field(j, "seed", spec.seed);
    read_field(j, "frame_interval_ms", spec.frame_interval_ms);
    read_field(j, "frames", n_frames);
    if (j.contains("tags")) {
      has_tags = true;
      for (const auto& t : j["tags"]) tags.emplace_back(t.at(0).get<double>(), t.at(1).get<double>());
    }
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidArgument, o.spec.string() + ": " + e.what());
  }
  if (g.seed) spec.seed = *g.seed;
  if (n_frames < 1) throw Error(Errc::kInvalidArgument, "frames must be at least 1");

  fs::create_directories(o.out);
  std::ofstream truth = open_out(o.out / kTruthFileName);
  if (has_tags) {
    const TagScene scene = render_light_tag_scene(spec, tags);
    std::vector<Frame> frames(static_cast<std::size_t>(n_frames), scene.frame);
    json tag_json = json::array();
    for (const auto& t : scene.tags) tag_json.push_back({t.x(), t.y()});
    for (int k = 0; k < n_frames; ++k) {
      frames[k].seq = static_cast<Seq>(k + 1);
      frames[k].timestamp_ms = k * spec.frame_interval_ms;
      truth << json{{"seq", frames[k].seq}, {"tags", tag_json}, {"valid", scene.valid}}.dump() << '\n';
    }
    write_sequence(o.out, frames);
  } else {
    const Scene scene = render_scene(spec, n_frames);
    for (std::size_t k = 0; k < scene.frames.size(); ++k) {
      truth << json{{"seq", scene.frames[k].seq}, {"quad", quad_to_json(scene.truth[k])}}.dump() << '\n';
    }
    write_sequence(o.out, scene.frames);
  }
  out << "wrote " << n_frames << " frame(s) to " << o.out.string() << '\n';
  return kExitOk;
}

int cmd_detect(const GlobalOptions& g, const DetectOptions& o, std::ostream& out) {
  const auto frames = load_frames(o.input);
  const auto detector = detector_for(o.mode, g);

  std::map<Seq, Quad> truth;
  if (o.truth_report) {
    const fs::path truth_path = (fs::is_directory(o.input) ? o.input : o.input.parent_path()) / kTruthFileName;
    truth = read_quads(truth_path);
  }

  std::ofstream file;
  if (o.candidates) file = open_out(*o.candidates);
  std::ostream& sink = o.candidates ? static_cast<std::ostream&>(file) : out;
  if (o.overlay_dir) fs::create_directories(*o.overlay_dir);
  if (o.edge_dir) fs::create_directories(*o.edge_dir);

  std::size_t detected = 0;
  std::size_t compared = 0;
  std::size_t within = 0;
  double rms_sum = 0.0;
  for (const Frame& frame : frames) {
    const GrayFrame gray = to_grayscale(frame);
    json line = {{"seq", frame.seq}, {"source", std::string(to_string(o.mode))}};
    std::optional<Quad> found;
    try {
      if (o.mode == DetectorKind::kScreen && o.edge_dir) {
        ScreenTrace trace;
        try {
          found = detect_screen(gray, g.detector.edges, g.detector.hough, frame.seq, &trace).quad;
        } catch (const Error&) {
          write_edge_dump(*o.edge_dir / ("edges_" + std::to_string(frame.seq) + ".txt"), trace.edges);
          throw;
        }
        write_edge_dump(*o.edge_dir / ("edges_" + std::to_string(frame.seq) + ".txt"), trace.edges);
      } else {
        found = detector->detect(gray, frame.seq).quad;
      }
      line["quad"] = quad_to_json(*found);
      ++detected;
    } catch (const Error& e) {
      line["quad"] = nullptr;
      line["error"] = std::string(to_string(e.code()));
    }
    if (o.truth_report) {
      if (const auto it = truth.find(frame.seq); it != truth.end()) {
        ++compared;
        if (found) {
          const double rms = corner_rms(*found, it->second);
          line["rms"] = rms;
          rms_sum += rms;
          if (rms <= 3.0) ++within;
        }
      }
    }
    sink << line.dump() << '\n';

    if (o.overlay_dir) {
      Frame overlay = frame;
      if (found) draw_quad(overlay, *found, kYellow);
      if (o.locked) draw_quad(overlay, *o.locked, kRed);
      write_ppm(*o.overlay_dir / sequence_file_name(frame.seq), overlay);
    }
  }

  if (o.truth_report) {
    out << json{{"report", "truth"},
                {"frames", frames.size()},
                {"compared", compared},
                {"detected", detected},
                {"within_3px", within},
                {"mean_rms", detected > 0 ? rms_sum / static_cast<double>(detected) : 0.0}}
               .dump()
        << '\n';
  }
  return kExitOk;
}

int cmd_warp(const GlobalOptions& g, const WarpOptions& o, std::ostream& out) {
  const auto frames = load_frames(o.input);
  std::map<Seq, Quad> quads;
  if (!o.quad) {
    const fs::path path = o.quads ? *o.quads : o.input / kTruthFileName;
    quads = read_quads(path);
  }
  fs::create_directories(o.out);
  std::vector<Frame> warped;
  for (const Frame& frame : frames) {
    Quad quad;
    if (o.quad) {
      quad = *o.quad;
    } else if (const auto it = quads.find(frame.seq); it != quads.end()) {
      quad = it->second;
    } else {
      throw Error(Errc::kInvalidArgument, "no quad for seq " + std::to_string(frame.seq));
    }
    warped.push_back(warp_crop(frame, quad, g.output));
  }
  write_sequence(o.out, warped);
  out << "warped " << warped.size() << " frame(s) to " << o.out.string() << '\n';
  return kExitOk;
}

int cmd_stabilize(const GlobalOptions&, const StabilizeOptions& o, std::ostream& out) {
  const auto frames = load_frames(o.input);
  const GrayFrame reference = to_grayscale(frames.front());
  for (const Frame& frame : frames) {
    const Registration r = register_translation(reference, to_grayscale(frame), o.radius);
    out << json{{"seq", frame.seq}, {"dx", r.dx}, {"dy", r.dy}, {"score", r.score}}.dump() << '\n';
  }
  return kExitOk;
}

SyncPipeline replay(const GlobalOptions& g, const std::vector<Frame>& frames, const std::vector<TimedEvent>& events,
                    DetectorKind initial_mode, bool record, PipelineHandlers handlers,
                    const std::function<void(const Frame&, const FrameEffects&)>& after_frame, std::ostream& err) {
  if (frames.empty()) throw Error(Errc::kIoError, "no frames to replay");
  Session session(frames.front().width, frames.front().height, g.session, g.output);
  session.set_mode(initial_mode);
  session.set_streaming(true);
  session.set_recording(record);

  auto mode = std::make_shared<DetectorKind>(initial_mode);
  if (!handlers.detect) {
    auto detectors = std::make_shared<std::map<DetectorKind, std::shared_ptr<RoiDetector>>>();
    handlers.detect = [mode, detectors, params = g.detector](const Frame& frame) -> std::optional<RoiCandidate> {
      auto& det = (*detectors)[*mode];
      if (!det) det = make_detector(*mode, params);
      if (!det) return std::nullopt;
      return det->detect(to_grayscale(frame), frame.seq);
    };
  }

  SyncPipeline pipeline(std::move(session), std::move(handlers));
  std::size_t next_event = 0;
  const auto apply_until = [&](std::int64_t t_ms) {
    while (next_event < events.size() && events[next_event].t_ms <= t_ms) {
      try {
        pipeline.push_event(events[next_event]);
      } catch (const Error& e) {
        err << "event at t=" << events[next_event].t_ms << " ms: " << e.what() << '\n';
      }
      ++next_event;
    }
  };

  for (const Frame& frame : frames) {
    apply_until(frame.timestamp_ms);
    *mode = pipeline.session().state().mode;
    auto ptr = std::make_shared<const Frame>(frame);
    const FrameEffects fx = pipeline.push_frame(ptr, frame.timestamp_ms);
    if (after_frame) after_frame(frame, fx);
  }
  apply_until(std::numeric_limits<std::int64_t>::max());
  return pipeline;
}

int cmd_stream(const GlobalOptions& g, const StreamOptions& o, std::ostream& out, std::ostream& err) {
  if (!is_valid_session_id(o.session_id)) throw Error(Errc::kInvalidArgument, "bad session id " + o.session_id);
  if (!(o.max_rate >= 0.0)) throw Error(Errc::kInvalidArgument, "max rate must be non-negative");
  const auto frames = load_frames(o.input);
  const auto events = o.script ? read_event_script(*o.script) : std::vector<TimedEvent>{};
  Client client(parse_endpoint(o.server));

  std::vector<IndexEntry> recorded;
  if (o.record_dir) fs::create_directories(*o.record_dir);

  int last_status = 0;
  std::optional<Seq> failed_seq;
  std::string failure;
  std::size_t stale = 0;
  const auto start = std::chrono::steady_clock::now();
  std::optional<std::chrono::steady_clock::time_point> last_post;
  const std::int64_t t0 = frames.front().timestamp_ms;

  PipelineHandlers handlers;
  handlers.record = [&](const Frame& frame) {
    const std::string name = sequence_file_name(frame.seq);
    write_ppm(*o.record_dir / name, frame);
    recorded.push_back({frame.seq, frame.timestamp_ms, name});
  };
  handlers.stream = [&](const StreamMeta& meta) {
    if (failed_seq) return;
    if (o.max_rate > 0.0) {
      if (last_post) std::this_thread::sleep_until(*last_post + std::chrono::duration<double>(1.0 / o.max_rate));
    } else {
      std::this_thread::sleep_until(start + std::chrono::milliseconds(meta.frame->timestamp_ms - t0));
    }
    last_post = std::chrono::steady_clock::now();
    FramePacket packet{o.session_id, meta.frame->seq, meta.frame->timestamp_ms, meta.quad, meta.mode,
                       encode_frame(*meta.frame, g.quality)};
    try {
      last_status = client.post_packet(packet);
    } catch (const Error& e) {
      failed_seq = meta.frame->seq;
      failure = e.what();
      return;
    }
    if (last_status == 409) {
      ++stale;
    } else if (last_status != 200) {
      failed_seq = meta.frame->seq;
      failure = "server answered " + std::to_string(last_status);
    }
  };

  replay(g, frames, events, o.initial_mode, o.record_dir.has_value(), std::move(handlers),
         [&](const Frame& frame, const FrameEffects& fx) {
           const int status = fx.stream ? last_status : 0;
           json line = {{"seq", frame.seq},
                        {"record", fx.record},
                        {"stream", fx.stream.has_value()},
                        {"detect", fx.detect},
                        {"status", status}};
           if (fx.stream && fx.stream->quad) line["quad"] = quad_to_json(*fx.stream->quad);
           out << line.dump() << '\n';
           if (o.on_frame) o.on_frame({frame.seq, fx, status});
           last_status = 0;
         },
         err);

  if (o.record_dir) write_index(*o.record_dir, recorded);
  if (failed_seq) {
    err << "stream failed at seq " << *failed_seq << ": " << failure << '\n';
    return kExitProtocol;
  }
  if (stale > 0) err << stale << " packet(s) rejected as stale\n";
  return kExitOk;
}

int cmd_serve(const GlobalOptions& g, const ServeOptions& o, std::ostream& out, std::ostream& err) {
  ServerConfig config;
  config.bind_address = g.bind_address;
  config.port = g.port;
  config.quality = g.quality;
  config.output = g.output;
  config.session = g.session;
  config.ui_dir = o.ui_dir;
  Server server(config);

  g_stop_requested.store(false);
  const auto old_int = std::signal(SIGINT, handle_stop_signal);
  const auto old_term = std::signal(SIGTERM, handle_stop_signal);
  int port = 0;
  try {
    port = server.start();
  } catch (const Error& e) {
    std::signal(SIGINT, old_int);
    std::signal(SIGTERM, old_term);
    err << e.what() << '\n';
    return kExitIo;
  }
  out << "listening on " << config.bind_address << ':' << port << std::endl;
  while (!g_stop_requested.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  std::signal(SIGINT, old_int);
  std::signal(SIGTERM, old_term);

  for (const auto& id : server.sessions()) {
    const SessionStats s = server.stats(id);
    out << "session " << id << ": accepted " << s.accepted << ", stale " << s.stale << ", malformed " << s.malformed
        << '\n';
  }
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"mvcast: region-of-interest capture, detection and streaming"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> quality, out_w, out_h;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--quality", quality, "JPEG quality 1-100")->check(CLI::Range(1, 100));
  app.add_option("--out-w", out_w, "warp output width");
  app.add_option("--out-h", out_h, "warp output height");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "render a synthetic scene");
  synth_cmd->add_option("--spec", synth.spec, "scene spec JSON")->required();
  synth_cmd->add_option("--out", synth.out, "output directory")->required();

  DetectOptions detect;
  std::string detect_mode = "screen";
  std::optional<std::string> detect_out, overlay_dir, edge_dir, locked;
  std::optional<double> hough_rho, hough_theta;
  std::optional<int> min_votes;
  auto* detect_cmd = app.add_subcommand("detect", "run a detector over frames");
  detect_cmd->add_option("input", detect.input, "frame directory or PPM file")->required();
  detect_cmd->add_option("--mode", detect_mode, "screen | lighttag | stub");
  detect_cmd->add_option("--out", detect_out, "candidate JSON lines (default stdout)");
  detect_cmd->add_option("--overlay", overlay_dir, "write overlay images here");
  detect_cmd->add_option("--dump-edges", edge_dir, "write edge point dumps here");
  detect_cmd->add_option("--locked", locked, "quad JSON drawn in red on overlays");
  detect_cmd->add_flag("--truth", detect.truth_report, "compare with truth.jsonl");
  detect_cmd->add_option("--hough-rho", hough_rho, "rho resolution, pixels");
  detect_cmd->add_option("--hough-theta", hough_theta, "theta resolution, degrees");
  detect_cmd->add_option("--min-votes", min_votes, "minimum accumulator votes");

  WarpOptions warp;
  std::optional<std::string> warp_quad, warp_quads;
  auto* warp_cmd = app.add_subcommand("warp", "warp frames to the output raster");
  warp_cmd->add_option("input", warp.input, "frame directory or PPM file")->required();
  warp_cmd->add_option("--out", warp.out, "output directory")->required();
  warp_cmd->add_option("--quad", warp_quad, "quad JSON for every frame");
  warp_cmd->add_option("--quads", warp_quads, "JSON lines {seq, quad} (default truth.jsonl)");

  StabilizeOptions stab;
  auto* stab_cmd = app.add_subcommand("stabilize", "register each frame against the first");
  stab_cmd->add_option("input", stab.input, "frame directory")->required();
  stab_cmd->add_option("--radius", stab.radius, "search radius, pixels")->check(CLI::PositiveNumber);

  StreamOptions stream;
  std::string stream_mode = "manual";
  std::optional<std::string> script, record_dir;
  auto* stream_cmd = app.add_subcommand("stream", "replay frames and events to a server");
  stream_cmd->add_option("input", stream.input, "frame directory")->required();
  stream_cmd->add_option("--server", stream.server, "server URL");
  stream_cmd->add_option("--session", stream.session_id, "session id");
  stream_cmd->add_option("--script", script, "event script (JSON lines)");
  stream_cmd->add_option("--max-rate", stream.max_rate, "frames per second; 0 follows timestamps");
  stream_cmd->add_option("--record-dir", record_dir, "keep local copies of all frames");
  stream_cmd->add_option("--mode", stream_mode, "initial detector mode");

  ServeOptions serve;
  std::optional<std::string> bind, ui_dir;
  std::optional<int> port;
  auto* serve_cmd = app.add_subcommand("serve", "run the ingest and view server");
  serve_cmd->add_option("--bind", bind, "bind address (env MVCAST_BIND)");
  serve_cmd->add_option("--port", port, "port (env MVCAST_PORT)");
  serve_cmd->add_option("--ui-dir", ui_dir, "static files served under /ui/");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    GlobalOptions g;
    if (config_path) apply_config_file(*config_path, g);
    if (serve_cmd->parsed()) {
      if (const char* v = std::getenv("MVCAST_BIND")) g.bind_address = v;
      if (const char* v = std::getenv("MVCAST_PORT")) g.port = std::atoi(v);
      if (const char* v = std::getenv("MVCAST_QUALITY")) g.quality = std::atoi(v);
    }
    if (seed) g.seed = seed;
    if (quality) g.quality = *quality;
    if (out_w) g.output.out_width = *out_w;
    if (out_h) g.output.out_height = *out_h;
    if (bind) g.bind_address = *bind;
    if (port) g.port = *port;
    if (hough_rho) g.detector.hough.rho_resolution = *hough_rho;
    if (hough_theta) g.detector.hough.theta_resolution = *hough_theta * std::numbers::pi / 180.0;
    if (min_votes) g.detector.hough.min_votes = *min_votes;
    if (g.quality < 1 || g.quality > 100) throw Error(Errc::kInvalidArgument, "quality must be in [1, 100]");
    g.output.validate();
    g.session.validate();
    g.detector.edges.validate();
    g.detector.hough.validate();
    g.detector.light_tags.validate();

    if (synth_cmd->parsed()) return cmd_synth(g, synth, out);
    if (detect_cmd->parsed()) {
      const auto kind = parse_detector_kind(detect_mode);
      if (!kind || *kind == DetectorKind::kManual) throw Error(Errc::kInvalidArgument, "unknown mode " + detect_mode);
      detect.mode = *kind;
      if (detect_out) detect.candidates = *detect_out;
      if (overlay_dir) detect.overlay_dir = *overlay_dir;
      if (edge_dir) detect.edge_dir = *edge_dir;
      if (locked) detect.locked = quad_arg(*locked);
      return cmd_detect(g, detect, out);
    }
    if (warp_cmd->parsed()) {
      if (warp_quad) warp.quad = quad_arg(*warp_quad);
      if (warp_quads) warp.quads = *warp_quads;
      return cmd_warp(g, warp, out);
    }
    if (stab_cmd->parsed()) return cmd_stabilize(g, stab, out);
    if (stream_cmd->parsed()) {
      const auto kind = parse_detector_kind(stream_mode);
      if (!kind) throw Error(Errc::kInvalidArgument, "unknown mode " + stream_mode);
      stream.initial_mode = *kind;
      if (script) stream.script = *script;
      if (record_dir) stream.record_dir = *record_dir;
      return cmd_stream(g, stream, out, err);
    }
    if (ui_dir) serve.ui_dir = *ui_dir;
    return cmd_serve(g, serve, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace mvcast::cli
