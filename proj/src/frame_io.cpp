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

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "mvcast/error.hpp"
#include "mvcast/imaging.hpp"

namespace mvcast {
namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Reads the next whitespace-delimited header token, skipping `#` comments.
bool next_token(std::span<const std::uint8_t> bytes, std::size_t& pos, std::string& token) {
  token.clear();
  while (pos < bytes.size()) {
    const char c = static_cast<char>(bytes[pos]);
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
    } else {
      break;
    }
  }
  while (pos < bytes.size() && !std::isspace(bytes[pos])) token.push_back(static_cast<char>(bytes[pos++]));
  return !token.empty();
}

}  // namespace

std::vector<std::uint8_t> to_ppm(const Frame& frame) {
  if (!is_consistent(frame)) throw Error(Errc::kInvalidArgument, "inconsistent frame");
  const std::string header =
      "P6\n" + std::to_string(frame.width) + " " + std::to_string(frame.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), frame.pixels.begin(), frame.pixels.end());
  return out;
}

Frame from_ppm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  std::string magic, w, h, maxval;
  if (!next_token(bytes, pos, magic) || magic != "P6") throw Error(Errc::kDecodeFailure, "not a P6 PPM");
  if (!next_token(bytes, pos, w) || !next_token(bytes, pos, h) || !next_token(bytes, pos, maxval)) {
    throw Error(Errc::kDecodeFailure, "truncated PPM header");
  }
  Frame f;
  try {
    f.width = std::stoi(w);
    f.height = std::stoi(h);
    if (std::stoi(maxval) != 255) throw Error(Errc::kDecodeFailure, "PPM maxval must be 255");
  } catch (const std::logic_error&) {
    throw Error(Errc::kDecodeFailure, "malformed PPM header");
  }
  if (f.width <= 0 || f.height <= 0) throw Error(Errc::kDecodeFailure, "bad PPM dimensions");
  ++pos;  // single whitespace after maxval
  const auto n = static_cast<std::size_t>(f.width) * f.height * 3;
  if (bytes.size() < pos + n) throw Error(Errc::kDecodeFailure, "truncated PPM data");
  f.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                  bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
  return f;
}

void write_ppm(const std::filesystem::path& path, const Frame& frame) {
  const auto bytes = to_ppm(frame);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::kIoError, "short write to " + path.string());
}

Frame read_ppm(const std::filesystem::path& path) { return from_ppm(read_file(path)); }

std::string sequence_file_name(Seq seq) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06llu.ppm", static_cast<unsigned long long>(seq));
  return buf;
}

std::vector<IndexEntry> read_index(const std::filesystem::path& dir) {
  std::ifstream in(dir / kIndexFileName);
  if (!in) throw Error(Errc::kIoError, "missing index file in " + dir.string());
  std::vector<IndexEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    IndexEntry e;
    if (!(fields >> e.seq >> e.timestamp_ms >> e.filename)) {
      throw Error(Errc::kIoError, "malformed index line " + std::to_string(line_no));
    }
    if (!entries.empty() && e.seq <= entries.back().seq) {
      throw Error(Errc::kIoError, "index seq not increasing at line " + std::to_string(line_no));
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_index(const std::filesystem::path& dir, std::span<const IndexEntry> entries) {
  std::ofstream out(dir / kIndexFileName);
  if (!out) throw Error(Errc::kIoError, "cannot write index in " + dir.string());
  for (const auto& e : entries) out << e.seq << ' ' << e.timestamp_ms << ' ' << e.filename << '\n';
}

Frame load_indexed_frame(const std::filesystem::path& dir, const IndexEntry& entry) {
  Frame f = read_ppm(dir / entry.filename);
  f.seq = entry.seq;
  f.timestamp_ms = entry.timestamp_ms;
  return f;
}

std::vector<IndexEntry> write_sequence(const std::filesystem::path& dir, std::span<const Frame> frames) {
  std::filesystem::create_directories(dir);
  std::vector<IndexEntry> entries;
  entries.reserve(frames.size());
  for (const auto& f : frames) {
    IndexEntry e{f.seq, f.timestamp_ms, sequence_file_name(f.seq)};
    write_ppm(dir / e.filename, f);
    entries.push_back(std::move(e));
  }
  write_index(dir, entries);
  return entries;
}

}  // namespace mvcast
