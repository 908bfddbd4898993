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

#include <csetjmp>
#include <cstdio>
#include <cstdlib>

#include <jpeglib.h>

#include "mvcast/error.hpp"
#include "mvcast/imaging.hpp"

namespace mvcast {
namespace {

// libjpeg reports fatal errors through error_exit, which must not return.
// Warnings (e.g. premature end of data) are promoted to failures so that a
// truncated stream never decodes into a partially gray image.
struct ErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void on_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<ErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void on_emit_message(j_common_ptr cinfo, int msg_level) {
  if (msg_level < 0) on_error_exit(cinfo);
}

}  // namespace

std::vector<std::uint8_t> encode_frame(const Frame& frame, int quality) {
  if (frame.width <= 0 || frame.height <= 0 || !is_consistent(frame)) {
    throw Error(Errc::kEncodeFailure, "empty or inconsistent frame");
  }
  if (quality < 1 || quality > 100) throw Error(Errc::kEncodeFailure, "quality outside 1..100");

  jpeg_compress_struct cinfo{};
  ErrorManager err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = on_error_exit;
  err.base.emit_message = on_emit_message;

  unsigned char* out = nullptr;
  unsigned long out_size = 0;

  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::free(out);
    throw Error(Errc::kEncodeFailure, err.message);
  }

  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &out, &out_size);
  cinfo.image_width = static_cast<JDIMENSION>(frame.width);
  cinfo.image_height = static_cast<JDIMENSION>(frame.height);
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);

  const auto stride = static_cast<std::size_t>(frame.width) * 3;
  while (cinfo.next_scanline < cinfo.image_height) {
    auto* row = const_cast<JSAMPLE*>(frame.pixels.data() + cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);

  std::vector<std::uint8_t> bytes(out, out + out_size);
  std::free(out);
  return bytes;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw Error(Errc::kDecodeFailure, "empty byte sequence");

  jpeg_decompress_struct cinfo{};
  ErrorManager err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = on_error_exit;
  err.base.emit_message = on_emit_message;

  // Declared before setjmp so the longjmp path never skips its destructor.
  Frame frame;

  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw Error(Errc::kDecodeFailure, err.message);
  }

  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  frame.width = static_cast<int>(cinfo.output_width);
  frame.height = static_cast<int>(cinfo.output_height);
  frame.pixels.resize(static_cast<std::size_t>(frame.width) * frame.height * 3);
  const auto stride = static_cast<std::size_t>(frame.width) * 3;
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPLE* row = frame.pixels.data() + cinfo.output_scanline * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return frame;
}

}  // namespace mvcast
