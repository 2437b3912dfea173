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

#ifndef XAMI_PNG_IO_HPP_
#define XAMI_PNG_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "xami/imgproc.hpp"

namespace xami {

/// Decodes a PNG into gray values in [0, 255] (8-bit) or [0, 65535]
/// (16-bit). Palette images are expanded; colour images are reduced with
/// luminance weights 0.299 R + 0.587 G + 0.114 B; alpha is ignored.
PixelGrid read_png_grayscale(std::span<const std::uint8_t> bytes);
PixelGrid read_png_file(const std::filesystem::path& path);

/// Encodes a single-channel PNG. Every value must be an integer within the
/// range of `bit_depth` (8 or 16).
std::vector<std::uint8_t> write_png_grayscale(const PixelGrid& grid, int bit_depth = 8);

}  // namespace xami

#endif  // XAMI_PNG_IO_HPP_
