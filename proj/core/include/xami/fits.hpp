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

#ifndef XAMI_FITS_HPP_
#define XAMI_FITS_HPP_

#include <cstddef>
#include <filesystem>
#include <span>

#include "xami/imgproc.hpp"

namespace xami {

/// Decodes the primary HDU of a FITS stream into a PixelGrid.
///
/// Only 2-D primary arrays are supported (NAXIS = 2; BITPIX 8, 16, 32, -32
/// or -64). BSCALE/BZERO are applied. NAXIS1 is the row length, so the first
/// stored row becomes row 0 of the grid. Non-finite pixels are replaced by
/// the frame's finite minimum. Errors are reported as FitsError carrying the
/// byte offset of the offending card or data position.
PixelGrid read_fits(std::span<const std::byte> bytes);
PixelGrid read_fits_file(const std::filesystem::path& path);

}  // namespace xami

#endif  // XAMI_FITS_HPP_
