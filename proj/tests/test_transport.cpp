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

#include <atomic>
#include <thread>

#include <gtest/gtest.h>

#include "mvcast/json.hpp"
#include "mvcast/synth.hpp"
#include "mvcast/transport.hpp"
#include "test_support.hpp"

#include "httplib.h"

using namespace mvcast;
using mvcast::fixtures::code_of;

namespace {

constexpr int kW = 160;
constexpr int kH = 120;
const Quad kScreen = Quad::rect(30, 20, 130, 100);

std::vector<std::uint8_t> scene_jpeg(std::uint64_t seed = 0) {
  SceneSpec spec;
  spec.width = kW;
  spec.height = kH;
  spec.true_quad = kScreen;
  spec.interior = Texture::kStripes;
  spec.background = Texture::kChecker;
  spec.noise_sigma = 3.0;
  spec.seed = seed;
  return encode_frame(render_scene(spec, 1).frames[0]);
}

FramePacket packet(const std::string& id, Seq seq, std::optional<Quad> quad = kScreen,
                   DetectorKind mode = DetectorKind::kScreen) {
  static const std::vector<std::uint8_t> image = scene_jpeg();
  return {id, seq, static_cast<std::int64_t>(seq) * 33, quad, mode, image};
}

ServerConfig small_config() {
  ServerConfig c;
  c.port = 0;
  c.output = {64, 48};
  return c;
}

}  // namespace

TEST(SessionId, Validation) {
  EXPECT_TRUE(is_valid_session_id("a"));
  EXPECT_TRUE(is_valid_session_id("Phone_01-b"));
  EXPECT_TRUE(is_valid_session_id(std::string(64, 'x')));
  EXPECT_FALSE(is_valid_session_id(""));
  EXPECT_FALSE(is_valid_session_id(std::string(65, 'x')));
  EXPECT_FALSE(is_valid_session_id("a/b"));
  EXPECT_FALSE(is_valid_session_id("a b"));
  EXPECT_FALSE(is_valid_session_id("caf\xc3\xa9"));
}

TEST(Packet, PartsRoundTrip) {
  for (const auto& p : {packet("cam", 7), packet("cam", 8, std::nullopt, DetectorKind::kManual)}) {
    const PacketParts parts = to_parts(p);
    EXPECT_EQ(from_parts(parts), p);
    const auto meta = nlohmann::json::parse(parts.meta);
    EXPECT_EQ(meta.at("seq"), p.seq);
    EXPECT_EQ(meta.at("quad").is_null(), !p.quad);
  }
}

TEST(Packet, MalformedParts) {
  const PacketParts good = to_parts(packet("cam", 1));
  auto meta = nlohmann::json::parse(good.meta);
  const auto with = [&](const char* key, nlohmann::json value) {
    auto m = meta;
    m[key] = std::move(value);
    return PacketParts{m.dump(), good.frame};
  };
  EXPECT_EQ(code_of([&] { (void)from_parts({"{", good.frame}); }), Errc::kMalformedPacket);
  EXPECT_EQ(code_of([&] { (void)from_parts(with("session_id", "bad id")); }), Errc::kMalformedPacket);
  EXPECT_EQ(code_of([&] { (void)from_parts(with("seq", -1)); }), Errc::kMalformedPacket);
  EXPECT_EQ(code_of([&] { (void)from_parts(with("seq", 1.5)); }), Errc::kMalformedPacket);
  EXPECT_EQ(code_of([&] { (void)from_parts({good.meta, ""}); }), Errc::kMalformedPacket);
  EXPECT_EQ(code_of([&] { (void)from_parts(with("mode", "laser")); }), Errc::kMalformedPacket);
  EXPECT_EQ(code_of([&] { (void)from_parts(with("quad", nlohmann::json::parse("[[0,0],[9,0],[0,9],[9,9]]"))); }),
            Errc::kMalformedPacket);
  meta.erase("timestamp_ms");
  EXPECT_EQ(code_of([&] { (void)from_parts({meta.dump(), good.frame}); }), Errc::kMalformedPacket);
}

TEST(Packet, MultipartBody) {
  const PacketParts parts{R"({"a":1})", "JPEGBYTES"};
  const std::string body = multipart_body(parts, "XYZ");
  EXPECT_EQ(body.rfind("--XYZ\r\n", 0), 0u);
  EXPECT_NE(body.find("name=\"meta\""), std::string::npos);
  EXPECT_NE(body.find("name=\"frame\"; filename=\"frame.jpg\""), std::string::npos);
  EXPECT_NE(body.find("JPEGBYTES"), std::string::npos);
  EXPECT_EQ(body.substr(body.size() - 9), "--XYZ--\r\n");
}

TEST(ServerCore, AcceptsThenRejectsStale) {
  Server server(small_config());
  EXPECT_EQ(server.ingest(packet("cam", 5))->seq, 5u);
  EXPECT_EQ(code_of([&] { (void)server.ingest(packet("cam", 3)); }), Errc::kStaleSeq);
  EXPECT_EQ(code_of([&] { (void)server.ingest(packet("cam", 5)); }), Errc::kStaleSeq);
  EXPECT_EQ(server.latest("cam")->seq, 5u);
  const SessionStats st = server.stats("cam");
  EXPECT_EQ(st.accepted, 1u);
  EXPECT_EQ(st.stale, 2u);
  EXPECT_EQ(server.ingest(packet("cam", 6))->seq, 6u);
}

TEST(ServerCore, PublishedPixelsAreTheWarpOfTheDecodedFrame) {
  Server server(small_config());
  const FramePacket p = packet("cam", 1);
  const auto view = server.ingest(p);
  const Frame decoded = decode_frame(p.image);
  const Frame expected = warp_crop(decoded, kScreen, {64, 48});
  EXPECT_EQ(view->quad, kScreen);
  EXPECT_EQ(view->pixels.pixels, expected.pixels);
  EXPECT_EQ(view->pixels.seq, 1u);
  const Frame jpeg = decode_frame(view->jpeg);
  EXPECT_EQ(jpeg.width, 64);
  EXPECT_EQ(jpeg.height, 48);
  EXPECT_EQ(decode_frame(view->preview).width, kW);
  EXPECT_EQ(view->candidate, kScreen);
  EXPECT_FALSE(view->locked);
}

TEST(ServerCore, NoQuadMeansFullFrame) {
  Server server(small_config());
  const auto view = server.ingest(packet("cam", 1, std::nullopt, DetectorKind::kManual));
  EXPECT_EQ(view->quad, Quad::full_frame(kW, kH));
  EXPECT_EQ(view->mode, DetectorKind::kManual);
}

TEST(ServerCore, FaceModePublishesAxisAlignedCrop) {
  Server server(small_config());
  const Quad q{{Point2<double>(40, 30), Point2<double>(90, 34), Point2<double>(88, 80), Point2<double>(42, 78)}};
  const FramePacket p = packet("cam", 1, q, DetectorKind::kFace);
  const auto view = server.ingest(p);
  const Frame expected = crop_axis_aligned(decode_frame(p.image), bounding_rect(q));
  EXPECT_EQ(view->pixels.width, expected.width);
  EXPECT_EQ(view->pixels.pixels, expected.pixels);
}

TEST(ServerCore, UnknownSessionAndBadInput) {
  Server server(small_config());
  EXPECT_EQ(code_of([&] { (void)server.latest("nope"); }), Errc::kUnknownSession);
  EXPECT_EQ(code_of([&] { server.enqueue_control("nope", LockEvent{}); }), Errc::kUnknownSession);
  EXPECT_EQ(code_of([&] { (void)server.stats("nope"); }), Errc::kUnknownSession);

  (void)server.ingest(packet("cam", 1));
  FramePacket bad = packet("cam", 2);
  bad.image = {1, 2, 3};
  EXPECT_EQ(code_of([&] { (void)server.ingest(bad); }), Errc::kMalformedPacket);
  bad = packet("bad id", 2);
  EXPECT_EQ(code_of([&] { (void)server.ingest(bad); }), Errc::kMalformedPacket);
  EXPECT_EQ(server.latest("cam")->seq, 1u);
  EXPECT_EQ(server.stats("cam").malformed, 1u);
  EXPECT_EQ(server.ingest(packet("cam", 2))->seq, 2u);
}

TEST(ServerCore, ControlLockHoldsTheQuad) {
  Server server(small_config());
  (void)server.ingest(packet("cam", 1));
  server.enqueue_control("cam", LockEvent{});
  const Quad other = Quad::rect(10, 10, 100, 90);
  auto view = server.ingest(packet("cam", 2, other));
  EXPECT_EQ(view->locked, other);  // the lock applies after this frame's candidate
  view = server.ingest(packet("cam", 3, kScreen));
  EXPECT_EQ(view->quad, other);
  EXPECT_EQ(view->candidate, kScreen);
  server.enqueue_control("cam", UnlockEvent{});
  view = server.ingest(packet("cam", 4, kScreen));
  EXPECT_EQ(view->quad, kScreen);
  EXPECT_FALSE(view->locked);
}

TEST(ServerCore, TapGestureMatchesOfflineSession) {
  Server server(small_config());
  (void)server.ingest(packet("cam", 1, std::nullopt, DetectorKind::kManual));
  server.enqueue_control("cam", TapEvent{{20, 15}});
  server.enqueue_control("cam", TapEvent{{120, 90}});
  const auto view = server.ingest(packet("cam", 2, std::nullopt, DetectorKind::kManual));

  Session offline(kW, kH);
  EXPECT_EQ(offline.on_tap({20, 15}, 0), TapOutcome::kCornerMoved);
  EXPECT_EQ(offline.on_tap({120, 90}, 1), TapOutcome::kRectangle);
  EXPECT_EQ(view->quad, *offline.state().locked);
  EXPECT_EQ(view->quad, Quad::rect(20, 15, 120, 90));
  EXPECT_TRUE(server.control_errors("cam").empty());

  server.enqueue_control("cam", RelockPreviousEvent{});
  (void)server.ingest(packet("cam", 3, std::nullopt, DetectorKind::kManual));
  EXPECT_EQ(server.control_errors("cam").size(), 1u);
}

TEST(ServerCore, SessionsAreIsolated) {
  Server server(small_config());
  std::vector<Seq> observed;
  server.set_observer([&](const PublishedView& v) { observed.push_back(v.seq); });
  (void)server.ingest(packet("a", 10));
  (void)server.ingest(packet("b", 1));
  EXPECT_EQ(code_of([&] { (void)server.ingest(packet("b", 1)); }), Errc::kStaleSeq);
  (void)server.ingest(packet("a", 11));
  EXPECT_EQ(server.latest("a")->seq, 11u);
  EXPECT_EQ(server.latest("b")->seq, 1u);
  EXPECT_EQ(server.stats("a").stale, 0u);
  EXPECT_EQ(server.sessions(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(observed, (std::vector<Seq>{10, 1, 11}));
}

TEST(ServerCore, ReadersNeverSeeTornViews) {
  Server server(small_config());
  (void)server.ingest(packet("cam", 1));
  std::atomic<bool> done{false};
  std::atomic<int> bad{0};
  std::vector<std::thread> readers;
  for (int r = 0; r < 3; ++r) {
    readers.emplace_back([&] {
      Seq last = 0;
      while (!done) {
        const auto v = server.latest("cam");
        if (v->pixels.seq != v->seq || v->seq < last) ++bad;
        const Frame f = decode_frame(v->jpeg);
        if (f.width != 64 || f.height != 48) ++bad;
        last = v->seq;
      }
    });
  }
  for (Seq s = 2; s <= 40; ++s) {
    const double o = static_cast<double>(s % 5);
    (void)server.ingest(packet("cam", s, Quad::rect(30 + o, 20, 130 - o, 100)));
  }
  done = true;
  for (auto& t : readers) t.join();
  EXPECT_EQ(bad, 0);
  EXPECT_EQ(server.latest("cam")->seq, 40u);
}

TEST(ServerConfig, Validates) {
  ServerConfig c;
  c.port = 70000;
  EXPECT_EQ(code_of([&] { c.validate(); }), Errc::kInvalidArgument);
  c = {};
  c.quality = 0;
  EXPECT_THROW(Server{c}, Error);
}

TEST(Endpoint, Parses) {
  const Endpoint e = parse_endpoint("http://example.test:9000");
  EXPECT_EQ(e.host, "example.test");
  EXPECT_EQ(e.port, 9000);
  EXPECT_EQ(parse_endpoint("http://h").port, 80);
  EXPECT_EQ(code_of([] { (void)parse_endpoint("ftp://h:1"); }), Errc::kInvalidArgument);
  EXPECT_EQ(code_of([] { (void)parse_endpoint("http://h:notaport"); }), Errc::kInvalidArgument);
}

class HttpServer : public ::testing::Test {
 protected:
  void SetUp() override { port_ = server_.start(); }
  void TearDown() override { server_.stop(); }

  Server server_{small_config()};
  int port_ = 0;
};

TEST_F(HttpServer, IngestAndView) {
  Client client({"127.0.0.1", port_});
  EXPECT_EQ(client.post_packet(packet("cam", 1)), 200);
  EXPECT_EQ(client.post_packet(packet("cam", 1)), 409);
  EXPECT_EQ(client.post_packet(packet("cam", 2)), 200);

  httplib::Client raw("127.0.0.1", port_);
  const auto res = raw.Get("/view/cam/latest.jpg");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("X-Seq"), "2");
  EXPECT_EQ(res->get_header_value("Cache-Control"), "no-store");
  EXPECT_GE(std::stoll(res->get_header_value("X-Staleness-Ms")), 0);
  const std::vector<std::uint8_t> bytes(res->body.begin(), res->body.end());
  EXPECT_EQ(decode_frame(bytes).pixels, decode_frame(server_.latest("cam")->jpeg).pixels);

  const auto [status, body] = client.get("/view/cam/meta");
  EXPECT_EQ(status, 200);
  const auto meta = nlohmann::json::parse(body);
  EXPECT_EQ(meta.at("seq"), 2);
  EXPECT_EQ(quad_from_json(meta.at("quad")), kScreen);
  EXPECT_EQ(meta.at("mode"), "screen");
  EXPECT_EQ(meta.at("timestamp_ms"), 66);
  EXPECT_TRUE(meta.at("locked").is_null());
  EXPECT_EQ(meta.at("width"), 64);

  EXPECT_EQ(client.get("/view/cam/preview.jpg").first, 200);
  const auto ppm = client.get("/view/cam/raw.ppm");
  EXPECT_EQ(ppm.first, 200);
  EXPECT_EQ(ppm.second.rfind("P6", 0), 0u);
  EXPECT_EQ(nlohmann::json::parse(client.get("/sessions").second), nlohmann::json::parse(R"(["cam"])"));
}

TEST_F(HttpServer, ErrorStatuses) {
  Client client({"127.0.0.1", port_});
  EXPECT_EQ(client.get("/view/ghost/latest.jpg").first, 404);
  EXPECT_EQ(client.get("/view/ghost/meta").first, 404);
  EXPECT_EQ(client.post_control("ghost", LockEvent{}), 404);

  FramePacket bad = packet("cam", 1);
  bad.image = {0xff, 0xd8, 0x00};
  EXPECT_EQ(client.post_packet(bad), 400);

  httplib::Client raw("127.0.0.1", port_);
  const PacketParts parts = to_parts(packet("cam", 1));
  const std::string body = multipart_body(parts, "b0undary");
  const auto mismatch = raw.Post("/ingest/other", body, "multipart/form-data; boundary=b0undary");
  ASSERT_TRUE(mismatch);
  EXPECT_EQ(mismatch->status, 400);
  const auto missing = raw.Post("/ingest/cam", "hello", "text/plain");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 400);

  EXPECT_EQ(client.post_packet(packet("cam", 1)), 200);
  const auto junk = raw.Post("/control/cam", "{not json", "application/json");
  ASSERT_TRUE(junk);
  EXPECT_EQ(junk->status, 400);
}

TEST_F(HttpServer, ControlIsQueuedAndApplied) {
  Client client({"127.0.0.1", port_});
  EXPECT_EQ(client.post_packet(packet("cam", 1)), 200);
  EXPECT_EQ(client.post_control("cam", LockEvent{}), 202);
  EXPECT_EQ(client.post_packet(packet("cam", 2, Quad::rect(5, 5, 150, 110))), 200);
  const auto meta = nlohmann::json::parse(client.get("/view/cam/meta").second);
  EXPECT_EQ(quad_from_json(meta.at("locked")), Quad::rect(5, 5, 150, 110));
}

TEST(Client, UnreachableServerIsAProtocolError) {
  Client client({"127.0.0.1", 1});
  EXPECT_EQ(code_of([&] { (void)client.post_packet(packet("cam", 1)); }), Errc::kProtocolError);
}
