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

#ifndef XAMI_IMGPROC_HPP_
#define XAMI_IMGPROC_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace xami {

/// Row-major grid of double-precision pixel values.
class PixelGrid {
 public:
  PixelGrid() = default;
  PixelGrid(std::size_t width, std::size_t height, double fill = 0.0);
  PixelGrid(std::size_t width, std::size_t height, std::vector<double> values);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double at(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }
  double& at(std::size_t row, std::size_t col) { return values_[row * width_ + col]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  friend bool operator==(const PixelGrid&, const PixelGrid&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> values_;
};

enum class FilterName { kV, kB, kU, kUVW1, kUVM2, kUVW2, kWhite };

/// Optical Monitor filter: name with central wavelength and bandwidth in nm.
struct FilterBand {
  FilterName name;
  std::string_view label;
  double central_wavelength_nm;
  double width_nm;
};

/// The seven OM filters, in catalogue order (V, B, U, UVW1, UVM2, UVW2, White).
std::span<const FilterBand> all_filter_bands() noexcept;
const FilterBand& filter_band(FilterName name);

/// Accepts the full label ("UVW1"), the one-letter code ("L"), or the
/// combined form ("UVW1(L)"), case-insensitively. Unknown names yield nullopt.
std::optional<FilterBand> parse_filter_band(std::string_view text);

struct ZScaleParams {
  std::size_t n_samples = 1000;
  double contrast = 0.25;
  double max_reject_fraction = 0.5;
  std::size_t min_pixels = 5;
  double k_rej = 2.5;
  std::size_t max_iterations = 5;

  /// Throws InvalidArgument when a field is outside its allowed range.
  void validate() const;
};

struct StretchParams {
  double a = 0.1;
  void validate() const;
};

struct ZScaleLimits {
  double z1;
  double z2;
};

/// Replaces NaN/Inf with the smallest finite value (0 if none is finite).
void replace_non_finite(PixelGrid& grid);

/// Block-mean downsampling. Both dimensions must be divisible by `factor`.
PixelGrid rebin(const PixelGrid& grid, std::size_t factor);

/// ZScale display limits.
///
/// Up to `n_samples` finite pixels are taken on an even stride and sorted.
/// A line is fitted to value-vs-rank by least squares; samples deviating by
/// more than k_rej sigma are rejected together with their immediate
/// neighbours, and the fit is repeated until nothing new is rejected,
/// `max_iterations` is reached, or more than `max_reject_fraction` of the
/// samples are gone. With median m, centre index c = (n - 1) / 2 and slope s:
///
///   z1 = max(min_sample, m - c * s / contrast)
///   z2 = min(max_sample, m + (n - c) * s / contrast)
///
/// A degenerate fit (too many rejections or zero slope) returns the sample
/// extrema. A fit whose residual spread is already zero stops iterating.
ZScaleLimits zscale_limits(const PixelGrid& grid, const ZScaleParams& params = {});

/// asinh(x / a) / asinh(1 / a) on x = clamp((v - z1) / (z2 - z1), 0, 1).
/// z1 == z2 maps every pixel to zero.
PixelGrid asinh_stretch(const PixelGrid& grid, double z1, double z2,
                        const StretchParams& params = {});

/// round(v * 255), half away from zero. Input must lie in [0, 1].
PixelGrid to_eight_bit(const PixelGrid& grid);

}  // namespace xami

#endif  // XAMI_IMGPROC_HPP_
