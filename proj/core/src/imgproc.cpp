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

#include "xami/imgproc.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "xami/error.hpp"

namespace xami {

PixelGrid::PixelGrid(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height) {
  if (width_ == 0 || height_ == 0)
    throw InvalidArgument("PixelGrid: empty " + std::to_string(width_) + "x" + std::to_string(height_) + " grid");
  values_.assign(width_ * height_, fill);
}

PixelGrid::PixelGrid(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width_ == 0 || height_ == 0)
    throw InvalidArgument("PixelGrid: empty " + std::to_string(width_) + "x" + std::to_string(height_) + " grid");
  if (values_.size() != width_ * height_) {
    throw InvalidArgument("PixelGrid: " + std::to_string(values_.size()) +
                          " values for a " + std::to_string(width_) + "x" +
                          std::to_string(height_) + " grid");
  }
}

namespace {

constexpr std::array<FilterBand, 7> kFilterBands = {{
    {FilterName::kV, "V", 543.0, 70.0},
    {FilterName::kB, "B", 450.0, 105.0},
    {FilterName::kU, "U", 344.0, 84.0},
    {FilterName::kUVW1, "UVW1", 291.0, 83.0},
    {FilterName::kUVM2, "UVM2", 231.0, 48.0},
    {FilterName::kUVW2, "UVW2", 212.0, 50.0},
    {FilterName::kWhite, "White", 406.0, 347.0},
}};

// One-letter codes used in OM file names.
constexpr std::array<char, 7> kFilterCodes = {'V', 'B', 'U', 'L', 'M', 'S', 'W'};

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

}  // namespace

std::span<const FilterBand> all_filter_bands() noexcept { return kFilterBands; }

const FilterBand& filter_band(FilterName name) {
  return kFilterBands.at(static_cast<std::size_t>(name));
}

std::optional<FilterBand> parse_filter_band(std::string_view text) {
  std::string key = upper(text);
  // "UVW1(L)" -> "UVW1"
  if (auto paren = key.find('('); paren != std::string::npos) key.resize(paren);
  while (!key.empty() && key.back() == ' ') key.pop_back();
  for (std::size_t i = 0; i < kFilterBands.size(); ++i) {
    if (key == upper(kFilterBands[i].label)) return kFilterBands[i];
    if (key.size() == 1 && key[0] == kFilterCodes[i]) return kFilterBands[i];
  }
  return std::nullopt;
}

void ZScaleParams::validate() const {
  if (!(contrast > 0.0 && contrast <= 1.0))
    throw InvalidArgument("zscale.contrast must be in (0, 1]");
  if (min_pixels < 1) throw InvalidArgument("zscale.min_pixels must be >= 1");
  if (n_samples < min_pixels)
    throw InvalidArgument("zscale.n_samples must be >= zscale.min_pixels");
  if (!(k_rej > 0.0)) throw InvalidArgument("zscale.k_rej must be > 0");
  if (!(max_reject_fraction >= 0.0 && max_reject_fraction <= 1.0))
    throw InvalidArgument("zscale.max_reject_fraction must be in [0, 1]");
}

void StretchParams::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("stretch.a must be > 0");
}

void replace_non_finite(PixelGrid& grid) {
  double lo = std::numeric_limits<double>::infinity();
  for (double v : grid.values())
    if (std::isfinite(v)) lo = std::min(lo, v);
  if (!std::isfinite(lo)) lo = 0.0;
  for (double& v : grid.values())
    if (!std::isfinite(v)) v = lo;
}

PixelGrid rebin(const PixelGrid& grid, std::size_t factor) {
  if (factor < 1) throw InvalidArgument("rebin: factor must be >= 1");
  if (grid.width() % factor != 0 || grid.height() % factor != 0) {
    throw InvalidArgument("rebin: " + std::to_string(grid.width()) + "x" +
                          std::to_string(grid.height()) +
                          " is not divisible by factor " + std::to_string(factor));
  }
  if (factor == 1) return grid;
  const std::size_t out_w = grid.width() / factor;
  const std::size_t out_h = grid.height() / factor;
  PixelGrid out(out_w, out_h);
  const double norm = 1.0 / static_cast<double>(factor * factor);
  for (std::size_t r = 0; r < out_h; ++r) {
    for (std::size_t c = 0; c < out_w; ++c) {
      double sum = 0.0;
      for (std::size_t dr = 0; dr < factor; ++dr) {
        const double* row = grid.values().data() + (r * factor + dr) * grid.width() + c * factor;
        for (std::size_t dc = 0; dc < factor; ++dc) sum += row[dc];
      }
      out.at(r, c) = sum * norm;
    }
  }
  return out;
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit fit_line(std::span<const double> y, const std::vector<char>& rejected) {
  double n = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (rejected[i]) continue;
    n += 1.0;
    sx += static_cast<double>(i);
    sy += y[i];
  }
  if (n == 0.0) return {};
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (rejected[i]) continue;
    const double dx = static_cast<double>(i) - mx;
    sxx += dx * dx;
    sxy += dx * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double sorted_median(std::span<const double> s) {
  const std::size_t n = s.size();
  return n % 2 == 1 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

}  // namespace

ZScaleLimits zscale_limits(const PixelGrid& grid, const ZScaleParams& params) {
  params.validate();

  std::size_t finite = 0;
  for (double v : grid.values()) finite += std::isfinite(v) ? 1 : 0;
  if (finite < params.min_pixels) {
    throw InvalidArgument("zscale: " + std::to_string(finite) +
                          " finite pixels, need at least " +
                          std::to_string(params.min_pixels));
  }

  const std::size_t stride = std::max<std::size_t>(1, finite / params.n_samples);
  std::vector<double> samples;
  samples.reserve(std::min(finite, params.n_samples));
  std::size_t k = 0;
  for (double v : grid.values()) {
    if (!std::isfinite(v)) continue;
    if (k++ % stride == 0) {
      samples.push_back(v);
      if (samples.size() == params.n_samples) break;
    }
  }
  std::sort(samples.begin(), samples.end());

  const std::size_t n = samples.size();
  const double lo = samples.front();
  const double hi = samples.back();
  const auto max_rejected = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * params.max_reject_fraction));
  const std::size_t min_good = std::max(params.min_pixels, n - max_rejected);
  const double spread_floor = 1e-12 * std::max(1.0, hi - lo);

  std::vector<char> rejected(n, 0);
  std::size_t good = n;
  for (std::size_t iter = 0; iter < params.max_iterations; ++iter) {
    const LineFit fit = fit_line(samples, rejected);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (rejected[i]) continue;
      const double r = samples[i] - (fit.intercept + fit.slope * static_cast<double>(i));
      ss += r * r;
    }
    const double sigma = std::sqrt(ss / static_cast<double>(good));
    if (sigma <= spread_floor) break;
    const double threshold = params.k_rej * sigma;

    std::vector<char> next = rejected;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = samples[i] - (fit.intercept + fit.slope * static_cast<double>(i));
      if (std::abs(r) > threshold) {
        next[i] = 1;
        if (i > 0) next[i - 1] = 1;
        if (i + 1 < n) next[i + 1] = 1;
      }
    }
    const auto next_good =
        static_cast<std::size_t>(std::count(next.begin(), next.end(), char{0}));
    if (next_good == good) break;
    rejected = std::move(next);
    good = next_good;
    if (good < min_good) break;
  }

  if (good < min_good) return {lo, hi};
  const double slope = fit_line(samples, rejected).slope;
  if (!(slope > 0.0)) return {lo, hi};

  const double scaled = slope / params.contrast;
  const double median = sorted_median(samples);
  const double center = static_cast<double>((n - 1) / 2);
  const double z1 = std::max(lo, median - center * scaled);
  const double z2 = std::min(hi, median + (static_cast<double>(n) - center) * scaled);
  return {z1, z2};
}

PixelGrid asinh_stretch(const PixelGrid& grid, double z1, double z2,
                        const StretchParams& params) {
  params.validate();
  if (!std::isfinite(z1) || !std::isfinite(z2))
    throw InvalidArgument("asinh_stretch: limits must be finite");
  if (z2 < z1) throw InvalidArgument("asinh_stretch: z2 < z1");
  PixelGrid out(grid.width(), grid.height());
  if (z1 == z2) return out;
  const double range = z2 - z1;
  const double norm = std::asinh(1.0 / params.a);
  auto src = grid.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double x = std::clamp((src[i] - z1) / range, 0.0, 1.0);
    dst[i] = std::asinh(x / params.a) / norm;
  }
  return out;
}

PixelGrid to_eight_bit(const PixelGrid& grid) {
  PixelGrid out(grid.width(), grid.height());
  auto src = grid.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double v = src[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidArgument("to_eight_bit: value " + std::to_string(v) +
                            " at index " + std::to_string(i) + " outside [0, 1]");
    }
    dst[i] = std::round(v * 255.0);
  }
  return out;
}

}  // namespace xami
