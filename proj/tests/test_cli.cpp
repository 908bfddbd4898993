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

#include <gtest/gtest.h>

#include "commands.hpp"
#include "mvcast/json.hpp"
#include "test_support.hpp"

using namespace mvcast;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mvcast");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<nlohmann::json> json_lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t file_count(const fs::path& dir) {
  return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator()));
}

// Small striped scene, the same for every test that asks.
fs::path synth_scene(const fs::path& root, int frames = 6) {
  const fs::path spec = root / "spec.json";
  std::ofstream(spec) << nlohmann::json{{"width", 320},      {"height", 240},
                                        {"quad", nlohmann::json::parse("[[60,50],[260,45],[265,190],[55,195]]")},
                                        {"interior", "stripes"},
                                        {"background", "stripes"},
                                        {"noise_sigma", 2.0},
                                        {"frames", frames},
                                        {"seed", 9}}
                             .dump();
  const fs::path out = root / "scene";
  const Outcome r = invoke({"synth", "--spec", spec.string(), "--out", out.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  return out;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"detect"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"--quality", "0", "detect", "x"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, cli::kExitOk);
}

TEST(Cli, SynthIsDeterministic) {
  const fs::path a = synth_scene(mvcast::fixtures::scratch_dir("cli_synth_a"));
  const fs::path b = synth_scene(mvcast::fixtures::scratch_dir("cli_synth_b"));
  EXPECT_EQ(file_count(a), 8u);  // 6 frames, index, truth
  for (const auto& entry : fs::directory_iterator(a))
    EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path();
  const auto truth = json_lines(slurp(a / "truth.jsonl"));
  ASSERT_EQ(truth.size(), 6u);
  EXPECT_EQ(truth[0].at("seq"), 1);
}

TEST(Cli, SynthRejectsBadSpecs) {
  const fs::path dir = mvcast::fixtures::scratch_dir("cli_synth_bad");
  std::ofstream(dir / "a.json") << R"({"interior":"plaid"})";
  EXPECT_EQ(invoke({"synth", "--spec", (dir / "a.json").string(), "--out", (dir / "o").string()}).code,
            cli::kExitUsage);
  std::ofstream(dir / "b.json") << R"({"quad":[[1,1],[100,1],[100,100],[1,100]]})";
  EXPECT_NE(invoke({"synth", "--spec", (dir / "b.json").string(), "--out", (dir / "o").string()}).code, 0);
  EXPECT_EQ(invoke({"synth", "--spec", (dir / "missing.json").string(), "--out", (dir / "o").string()}).code,
            cli::kExitIo);
}

TEST(Cli, DetectFindsTheScreen) {
  const fs::path root = mvcast::fixtures::scratch_dir("cli_detect");
  const fs::path scene = synth_scene(root);
  const Outcome r = invoke({"detect", scene.string(), "--truth", "--overlay", (root / "ov").string(), "--dump-edges",
                            (root / "edges").string(), "--locked", "[[70,60],[250,60],[250,180],[70,180]]"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = json_lines(r.out);
  ASSERT_EQ(lines.size(), 7u);
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(lines[i].at("source"), "screen");
    EXPECT_FALSE(lines[i].at("quad").is_null());
    EXPECT_LE(lines[i].at("rms").get<double>(), 3.0);
  }
  EXPECT_EQ(lines[6].at("report"), "truth");
  EXPECT_EQ(lines[6].at("detected"), 6);
  EXPECT_EQ(file_count(root / "ov"), 6u);
  EXPECT_EQ(file_count(root / "edges"), 6u);
}

TEST(Cli, DetectReportsMisses) {
  const fs::path dir = mvcast::fixtures::scratch_dir("cli_detect_miss");
  write_ppm(dir / "flat.ppm", Frame::filled(64, 48, {90, 90, 90}));
  const Outcome r = invoke({"detect", (dir / "flat.ppm").string(), "--mode", "lighttag"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = json_lines(r.out);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_TRUE(lines[0].at("quad").is_null());
  EXPECT_EQ(lines[0].at("error"), "TagCountMismatch");
  EXPECT_EQ(invoke({"detect", (dir / "flat.ppm").string(), "--mode", "manual"}).code, cli::kExitUsage);
}

TEST(Cli, EmptyInputIsAnIoError) {
  const fs::path dir = mvcast::fixtures::scratch_dir("cli_empty");
  EXPECT_EQ(invoke({"detect", dir.string()}).code, cli::kExitIo);
  EXPECT_EQ(invoke({"stabilize", dir.string()}).code, cli::kExitIo);
  EXPECT_EQ(invoke({"stream", dir.string(), "--server", "http://127.0.0.1:1"}).code, cli::kExitIo);
}

TEST(Cli, WarpUsesTruthOrAFixedQuad) {
  const fs::path root = mvcast::fixtures::scratch_dir("cli_warp");
  const fs::path scene = synth_scene(root, 3);
  ASSERT_EQ(invoke({"--out-w", "100", "--out-h", "80", "warp", scene.string(), "--out", (root / "w").string()}).code, 0);
  const auto frames = cli::load_frames(root / "w");
  ASSERT_EQ(frames.size(), 3u);
  EXPECT_EQ(frames[0].width, 100);
  EXPECT_EQ(frames[0].height, 80);

  ASSERT_EQ(invoke({"warp", scene.string(), "--out", (root / "q").string(), "--quad",
                    "[[0,0],[320,0],[320,240],[0,240]]"})
                .code,
            0);
  EXPECT_EQ(cli::load_frames(root / "q")[1].pixels, warp_crop(cli::load_frames(scene)[1], Quad::full_frame(320, 240), {}).pixels);
  EXPECT_EQ(invoke({"warp", scene.string(), "--out", (root / "x").string(), "--quad", "[[0,0]]"}).code,
            cli::kExitUsage);
}

TEST(Cli, StabilizePrintsOneLinePerFrame) {
  const fs::path dir = mvcast::fixtures::scratch_dir("cli_stab");
  const GrayFrame big = mvcast::fixtures::textured_gray(90, 70, 4);
  std::vector<Frame> frames;
  for (int k = 0; k < 3; ++k) {
    Frame f = Frame::filled(64, 48, {});
    for (int y = 0; y < 48; ++y)
      for (int x = 0; x < 64; ++x) {
        const auto v = big.at(x + 10 - k, y + 10);
        f.set(x, y, {v, v, v});
      }
    f.seq = static_cast<Seq>(k + 1);
    frames.push_back(f);
  }
  write_sequence(dir, frames);
  const Outcome r = invoke({"stabilize", dir.string(), "--radius", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = json_lines(r.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[2].at("dx"), 2);
  EXPECT_EQ(lines[2].at("dy"), 0);
}

TEST(Cli, StreamToUnreachableServer) {
  const fs::path root = mvcast::fixtures::scratch_dir("cli_stream_down");
  const fs::path scene = synth_scene(root, 2);
  const Outcome r = invoke({"stream", scene.string(), "--server", "http://127.0.0.1:1", "--max-rate", "1000"});
  EXPECT_EQ(r.code, cli::kExitProtocol);
  EXPECT_NE(r.err.find("seq 1"), std::string::npos) << r.err;
}

TEST(Cli, StreamRecordsAndPublishes) {
  const fs::path root = mvcast::fixtures::scratch_dir("cli_stream");
  const fs::path scene = synth_scene(root, 5);
  std::ofstream(root / "script.jsonl") << R"({"t_ms":0,"event":{"type":"mode","kind":"screen"}})" << '\n';
  ServerConfig cfg;
  cfg.port = 0;
  Server server(cfg);
  const int port = server.start();
  const Outcome r = invoke({"stream", scene.string(), "--server", "http://127.0.0.1:" + std::to_string(port),
                            "--session", "cli", "--max-rate", "1000", "--script", (root / "script.jsonl").string(),
                            "--record-dir", (root / "rec").string()});
  server.stop();
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(file_count(root / "rec"), 6u);
  EXPECT_EQ(server.latest("cli")->seq, 5u);
  EXPECT_EQ(server.stats("cli").accepted, 5u);
  const auto lines = json_lines(r.out);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0].at("status"), 200);
  EXPECT_TRUE(lines[1].contains("quad"));
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
  const fs::path dir = mvcast::fixtures::scratch_dir("cli_config");
  std::ofstream(dir / "c.json") << R"({"quality":55,"output":{"width":200,"height":150},
                                       "hough":{"theta_deg":0.5,"min_votes":12},"session":{"candidate_period_ms":900}})";
  cli::GlobalOptions g;
  cli::apply_config_file(dir / "c.json", g);
  EXPECT_EQ(g.quality, 55);
  EXPECT_EQ(g.output.out_width, 200);
  EXPECT_EQ(g.detector.hough.min_votes, 12);
  EXPECT_NEAR(g.detector.hough.theta_resolution, 0.5 * std::numbers::pi / 180.0, 1e-15);
  EXPECT_EQ(g.session.candidate_period_ms, 900);

  std::ofstream(dir / "bad.json") << "{";
  EXPECT_THROW(cli::apply_config_file(dir / "bad.json", g), Error);

  const fs::path scene = synth_scene(dir, 1);
  const Outcome r = invoke({"--config", (dir / "c.json").string(), "--out-w", "90", "warp", scene.string(), "--out",
                            (dir / "w").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto frames = cli::load_frames(dir / "w");
  EXPECT_EQ(frames[0].width, 90);
  EXPECT_EQ(frames[0].height, 150);
}
