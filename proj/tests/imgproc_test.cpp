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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support/oracles.hpp"
#include "xami/error.hpp"

namespace xami {
namespace {

PixelGrid ramp(std::size_t w, std::size_t h) {
  PixelGrid g(w, h);
  for (std::size_t i = 0; i < g.size(); ++i) g.values()[i] = static_cast<double>(i);
  return g;
}

TEST(FilterBands, CatalogueValues) {
  const auto& u = filter_band(FilterName::kU);
  EXPECT_EQ(u.label, "U");
  EXPECT_DOUBLE_EQ(u.central_wavelength_nm, 344.0);
  EXPECT_DOUBLE_EQ(u.width_nm, 84.0);
  const auto& w = filter_band(FilterName::kWhite);
  EXPECT_DOUBLE_EQ(w.central_wavelength_nm, 406.0);
  EXPECT_DOUBLE_EQ(w.width_nm, 347.0);
  EXPECT_EQ(all_filter_bands().size(), 7u);
}

TEST(FilterBands, ParsesLabelsAndCodes) {
  EXPECT_EQ(parse_filter_band("UVW1")->name, FilterName::kUVW1);
  EXPECT_EQ(parse_filter_band("L")->name, FilterName::kUVW1);
  EXPECT_EQ(parse_filter_band("UVW1(L)")->name, FilterName::kUVW1);
  EXPECT_EQ(parse_filter_band("M")->name, FilterName::kUVM2);
  EXPECT_EQ(parse_filter_band("S")->name, FilterName::kUVW2);
  EXPECT_EQ(parse_filter_band("W")->name, FilterName::kWhite);
  EXPECT_FALSE(parse_filter_band("H-alpha").has_value());
  EXPECT_FALSE(parse_filter_band("").has_value());
}

TEST(PixelGrid, RejectsBadShapes) {
  EXPECT_THROW(PixelGrid(0, 3), InvalidArgument);
  EXPECT_THROW(PixelGrid(2, 2, std::vector<double>(3)), InvalidArgument);
}

TEST(ReplaceNonFinite, UsesFiniteMinimum) {
  PixelGrid g(3, 1, std::vector<double>{4.0, std::nan(""), -std::numeric_limits<double>::infinity()});
  replace_non_finite(g);
  EXPECT_EQ(g.at(0, 1), 4.0);
  EXPECT_EQ(g.at(0, 2), 4.0);
  PixelGrid all_bad(2, 1, std::vector<double>{std::nan(""), std::nan("")});
  replace_non_finite(all_bad);
  EXPECT_EQ(all_bad.at(0, 0), 0.0);
}

TEST(Rebin, BlockMean) {
  const PixelGrid g(2, 2, std::vector<double>{1, 3, 5, 7});
  const PixelGrid out = rebin(g, 2);
  ASSERT_EQ(out.width(), 1u);
  EXPECT_DOUBLE_EQ(out.at(0, 0), 4.0);
}

TEST(Rebin, ConstantStaysConstant) {
  const PixelGrid g(12, 6, 2.5);
  for (std::size_t f : {1u, 2u, 3u, 6u}) {
    const PixelGrid out = rebin(g, f);
    for (double v : out.values()) EXPECT_DOUBLE_EQ(v, 2.5);
  }
}

TEST(Rebin, RejectsNonDivisible) {
  EXPECT_THROW(rebin(PixelGrid(5, 4), 2), InvalidArgument);
  EXPECT_THROW(rebin(PixelGrid(4, 4), 0), InvalidArgument);
}

TEST(Rebin, ConservesFluxOnFullFrame) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  PixelGrid g(2048, 2048);
  long double in_sum = 0;
  for (double& v : g.values()) {
    v = u(rng);
    in_sum += v;
  }
  const PixelGrid out = rebin(g, 4);
  ASSERT_EQ(out.width(), 512u);
  ASSERT_EQ(out.height(), 512u);
  long double out_sum = 0;
  for (double v : out.values()) out_sum += v;
  EXPECT_NEAR(static_cast<double>(out_sum * 16 / in_sum), 1.0, 1e-9);
}

TEST(ZScaleParams, Validation) {
  ZScaleParams p;
  EXPECT_NO_THROW(p.validate());
  p.contrast = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.contrast = 1.5;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.min_pixels = 0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.n_samples = 3;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.k_rej = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(ZScale, ConstantImage) {
  const auto lim = zscale_limits(PixelGrid(40, 40, 7.25));
  EXPECT_EQ(lim.z1, 7.25);
  EXPECT_EQ(lim.z2, 7.25);
}

TEST(ZScale, RampMatchesReference) {
  const PixelGrid g = ramp(1000, 1);
  const auto lim = zscale_limits(g);
  const auto ref = testing::reference_zscale({g.values().begin(), g.values().end()}, {});
  EXPECT_NEAR(lim.z1, ref.first, 1e-6 * std::max(1.0, std::abs(ref.first)));
  EXPECT_NEAR(lim.z2, ref.second, 1e-6 * std::max(1.0, std::abs(ref.second)));
  // An exact ramp has slope 1, so the interval is the full sample range.
  EXPECT_DOUBLE_EQ(lim.z1, 0.0);
  EXPECT_DOUBLE_EQ(lim.z2, 999.0);
}

TEST(ZScale, OutliersAreRejected) {
  PixelGrid g = ramp(100, 100);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pos(0, g.size() - 1);
  for (int i = 0; i < 100; ++i) g.values()[pos(rng)] = 1e9;
  const auto lim = zscale_limits(g);
  const auto ref = testing::reference_zscale({g.values().begin(), g.values().end()}, {});
  EXPECT_NEAR(lim.z2, ref.second, 1e-6 * std::abs(ref.second));
  EXPECT_LT(lim.z2, 1e9);
}

TEST(ZScale, TooFewPixels) {
  PixelGrid g(2, 2, std::vector<double>{1, 2, std::nan(""), 4});
  EXPECT_THROW(zscale_limits(g), InvalidArgument);
}

TEST(ZScale, LimitsStayInsideSampleRange) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    std::lognormal_distribution<double> d(0.0, 1.0 + trial % 4);
    PixelGrid g(64, 48);
    for (double& v : g.values()) v = d(rng);
    const auto lim = zscale_limits(g);
    const auto [lo, hi] = std::minmax_element(g.values().begin(), g.values().end());
    EXPECT_LE(*lo, lim.z1);
    EXPECT_LE(lim.z1, lim.z2);
    EXPECT_LE(lim.z2, *hi);
  }
}

TEST(ZScale, IsPure) {
  const PixelGrid g = ramp(33, 31);
  const auto a = zscale_limits(g);
  const auto b = zscale_limits(g);
  EXPECT_EQ(a.z1, b.z1);
  EXPECT_EQ(a.z2, b.z2);
}

TEST(AsinhStretch, Endpoints) {
  const PixelGrid g(2, 1, std::vector<double>{10.0, 20.0});
  const PixelGrid out = asinh_stretch(g, 10.0, 20.0);
  EXPECT_DOUBLE_EQ(out.at(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(out.at(0, 1), 1.0);
}

TEST(AsinhStretch, ClosedFormAtTenPercent) {
  const PixelGrid g(1, 1, std::vector<double>{1.0});
  const PixelGrid out = asinh_stretch(g, 0.0, 10.0);
  EXPECT_NEAR(out.at(0, 0), std::asinh(1.0) / std::asinh(10.0), 1e-15);
  EXPECT_NEAR(out.at(0, 0), 0.29397, 5e-6);
}

TEST(AsinhStretch, MonotoneAndBounded) {
  PixelGrid g(201, 1);
  for (std::size_t i = 0; i < g.size(); ++i) g.values()[i] = -50.0 + static_cast<double>(i);
  const PixelGrid out = asinh_stretch(g, -20.0, 100.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_GE(out.values()[i], 0.0);
    EXPECT_LE(out.values()[i], 1.0);
    if (i) EXPECT_LE(out.values()[i - 1], out.values()[i]);
  }
}

TEST(AsinhStretch, DegenerateAndInvalidLimits) {
  const PixelGrid g(3, 1, 5.0);
  const PixelGrid flat = asinh_stretch(g, 5.0, 5.0);
  for (double v : flat.values()) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(asinh_stretch(g, 0.0, std::nan("")), InvalidArgument);
  EXPECT_THROW(asinh_stretch(g, std::numeric_limits<double>::infinity(), 1.0), InvalidArgument);
  EXPECT_THROW(asinh_stretch(g, 2.0, 1.0), InvalidArgument);
  StretchParams bad;
  bad.a = 0.0;
  EXPECT_THROW(asinh_stretch(g, 0.0, 1.0, bad), InvalidArgument);
}

TEST(ToEightBit, RoundsHalfAwayFromZero) {
  const PixelGrid g(4, 1, std::vector<double>{0.0, 1.0, 0.5, 0.5 / 255.0});
  const PixelGrid out = to_eight_bit(g);
  EXPECT_EQ(out.at(0, 0), 0.0);
  EXPECT_EQ(out.at(0, 1), 255.0);
  EXPECT_EQ(out.at(0, 2), 128.0);
  EXPECT_EQ(out.at(0, 3), 1.0);
}

TEST(ToEightBit, IdempotentAfterNormalisation) {
  PixelGrid g(256, 1);
  for (std::size_t i = 0; i < 256; ++i) g.values()[i] = static_cast<double>(i) / 255.0;
  const PixelGrid once = to_eight_bit(g);
  for (std::size_t i = 0; i < 256; ++i) EXPECT_EQ(once.values()[i], static_cast<double>(i));
  PixelGrid renorm = once;
  for (double& v : renorm.values()) v /= 255.0;
  EXPECT_EQ(to_eight_bit(renorm), once);
}

TEST(ToEightBit, RejectsOutOfRange) {
  EXPECT_THROW(to_eight_bit(PixelGrid(1, 1, 1.01)), InvalidArgument);
  EXPECT_THROW(to_eight_bit(PixelGrid(1, 1, -0.01)), InvalidArgument);
}

}  // namespace
}  // namespace xami
