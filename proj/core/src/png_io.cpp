// Copyright 2026 The xami-tools Authors. All Rights Reserved.
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

#include "xami/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "xami/error.hpp"

namespace xami {
namespace {

struct ReadCursor {
  std::span<const std::uint8_t> data;
  std::size_t pos = 0;
};

void read_callback(png_structp png, png_bytep out, png_size_t count) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->pos + count > cur->data.size()) png_error(png, "unexpected end of PNG stream");
  std::memcpy(out, cur->data.data() + cur->pos, count);
  cur->pos += count;
}

void write_callback(png_structp png, png_bytep in, png_size_t count) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), in, in + count);
}

void flush_callback(png_structp) {}

[[noreturn]] void error_callback(png_structp, png_const_charp msg) {
  throw PngError(std::string("PNG: ") + msg);
}

void warning_callback(png_structp, png_const_charp) {}

// libpng's longjmp path is replaced by exceptions from error_callback; the
// structs are released by this guard during unwinding.
struct ReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~ReadGuard() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct WriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~WriteGuard() { png_destroy_write_struct(&png, info ? &info : nullptr); }
};

}  // namespace

PixelGrid read_png_grayscale(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
    throw PngError("PNG: missing PNG signature");

  ReadGuard g;
  g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, error_callback, warning_callback);
  if (!g.png) throw PngError("PNG: cannot allocate decoder");
  g.info = png_create_info_struct(g.png);
  if (!g.info) throw PngError("PNG: cannot allocate decoder");

  ReadCursor cursor{bytes, 0};
  png_set_read_fn(g.png, &cursor, read_callback);
  png_read_info(g.png, g.info);

  const auto width = png_get_image_width(g.png, g.info);
  const auto height = png_get_image_height(g.png, g.info);
  const int color_type = png_get_color_type(g.png, g.info);
  int bit_depth = png_get_bit_depth(g.png, g.info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(g.png);
    bit_depth = 8;
  }
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(g.png);
    bit_depth = 8;
  }
  if (png_get_valid(g.png, g.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(g.png);
  if (bit_depth == 16) png_set_swap(g.png);  // native little-endian rows
  png_read_update_info(g.png, g.info);

  const int channels = png_get_channels(g.png, g.info);
  const int out_type = png_get_color_type(g.png, g.info);
  const bool has_color = (out_type & PNG_COLOR_MASK_COLOR) != 0;
  if (channels < 1 || channels > 4)
    throw PngError("PNG: unsupported color type " + std::to_string(color_type));

  const std::size_t rowbytes = png_get_rowbytes(g.png, g.info);
  std::vector<std::uint8_t> buffer(rowbytes * height);
  std::vector<png_bytep> rows(height);
  for (std::size_t r = 0; r < height; ++r) rows[r] = buffer.data() + r * rowbytes;
  png_read_image(g.png, rows.data());
  png_read_end(g.png, nullptr);

  PixelGrid grid(width, height);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      auto sample = [&](int ch) -> double {
        const std::size_t idx = c * static_cast<std::size_t>(channels) + static_cast<std::size_t>(ch);
        if (bit_depth == 16) {
          std::uint16_t v;
          std::memcpy(&v, rows[r] + 2 * idx, 2);
          return v;
        }
        return rows[r][idx];
      };
      grid.at(r, c) = has_color
                          ? 0.299 * sample(0) + 0.587 * sample(1) + 0.114 * sample(2)
                          : sample(0);
    }
  }
  return grid;
}

PixelGrid read_png_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return read_png_grayscale(raw);
}

std::vector<std::uint8_t> write_png_grayscale(const PixelGrid& grid, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16)
    throw InvalidArgument("write_png_grayscale: bit depth must be 8 or 16");
  if (grid.empty()) throw InvalidArgument("write_png_grayscale: empty grid");
  const double max_value = bit_depth == 8 ? 255.0 : 65535.0;
  for (double v : grid.values()) {
    if (!(v >= 0.0 && v <= max_value) || std::floor(v) != v)
      throw InvalidArgument("write_png_grayscale: value " + std::to_string(v) +
                            " is not an integer in the " + std::to_string(bit_depth) +
                            "-bit range");
  }

  const std::size_t bpp = bit_depth / 8;
  std::vector<std::uint8_t> pixels(grid.size() * bpp);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto v = static_cast<std::uint32_t>(grid.values()[i]);
    if (bpp == 1) {
      pixels[i] = static_cast<std::uint8_t>(v);
    } else {
      pixels[2 * i] = static_cast<std::uint8_t>(v >> 8);
      pixels[2 * i + 1] = static_cast<std::uint8_t>(v & 0xff);
    }
  }

  std::vector<std::uint8_t> out;
  WriteGuard g;
  g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, error_callback, warning_callback);
  if (!g.png) throw PngError("PNG: cannot allocate encoder");
  g.info = png_create_info_struct(g.png);
  if (!g.info) throw PngError("PNG: cannot allocate encoder");
  png_set_write_fn(g.png, &out, write_callback, flush_callback);
  png_set_IHDR(g.png, g.info, static_cast<png_uint_32>(grid.width()),
               static_cast<png_uint_32>(grid.height()), bit_depth, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(g.png, g.info);
  const std::size_t stride = grid.width() * bpp;
  for (std::size_t r = 0; r < grid.height(); ++r) png_write_row(g.png, pixels.data() + r * stride);
  png_write_end(g.png, nullptr);
  return out;
}

}  // namespace xami
