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

#ifndef XAMI_MASK_HPP_
#define XAMI_MASK_HPP_

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

namespace xami {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// One or more closed rings in pixel coordinates (origin top-left, x to the
/// right). Each ring is filled with the even-odd rule; rings are unioned.
struct Polygon {
  std::vector<std::vector<Point>> rings;
  friend bool operator==(const Polygon&, const Polygon&) = default;
};

/// Uncompressed run-length encoding over the column-major pixel order,
/// starting with a (possibly empty) run of zeros.
struct Rle {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint32_t> counts;

  std::uint64_t area() const noexcept;
  friend bool operator==(const Rle&, const Rle&) = default;
};

/// Row-major boolean raster.
class Bitmap {
 public:
  Bitmap() = default;
  Bitmap(std::size_t height, std::size_t width, bool fill = false)
      : height_(height), width_(width), bits_(height * width, fill ? 1 : 0) {}

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool get(std::size_t row, std::size_t col) const { return bits_[row * width_ + col] != 0; }
  void set(std::size_t row, std::size_t col, bool v = true) { bits_[row * width_ + col] = v ? 1 : 0; }
  std::uint64_t count() const noexcept;

  const std::vector<std::uint8_t>& data() const noexcept { return bits_; }

  friend bool operator==(const Bitmap&, const Bitmap&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  friend bool operator==(const BBox&, const BBox&) = default;
};

/// A binary region on an h x w canvas, in one of three encodings.
class InstanceMask {
 public:
  using Encoding = std::variant<Polygon, Rle, Bitmap>;

  InstanceMask() = default;
  /// Polygon vertices must lie within the canvas, with 1 px of slack.
  static InstanceMask from_polygon(Polygon polygon, std::size_t height, std::size_t width);
  static InstanceMask from_rle(Rle rle);
  static InstanceMask from_bitmap(Bitmap bitmap);
  /// Axis-aligned rectangle; covers pixels whose centres fall inside the box.
  static InstanceMask from_box(const BBox& box, std::size_t height, std::size_t width);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  const Encoding& encoding() const noexcept { return encoding_; }
  bool is_polygon() const noexcept { return std::holds_alternative<Polygon>(encoding_); }
  bool is_rle() const noexcept { return std::holds_alternative<Rle>(encoding_); }

  Bitmap to_bitmap() const;
  Rle to_rle() const;
  std::uint64_t area() const;

  friend bool operator==(const InstanceMask&, const InstanceMask&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  Encoding encoding_;
};

/// Even-odd scanline fill; pixel (r, c) is set when (c + 0.5, r + 0.5) is
/// inside. Rings are unioned.
Bitmap rasterize(const Polygon& polygon, std::size_t height, std::size_t width);
/// Rasterises any encoding onto an h x w canvas; RLE and bitmap masks must
/// already have that size.
Bitmap rasterize(const InstanceMask& mask, std::size_t height, std::size_t width);

Rle rle_encode(const Bitmap& bitmap);
/// Throws InvalidArgument when the counts do not sum to h * w.
Bitmap rle_decode(const Rle& rle);
void validate_rle(const Rle& rle);

/// Tight pixel bounds (x = first column, w = last - first + 1).
/// Throws InvalidArgument for an empty mask.
BBox bbox_of(const Bitmap& bitmap);
BBox bbox_of(const Rle& rle);
BBox bbox_of(const InstanceMask& mask);

/// Bounds of the polygon vertices.
BBox vertex_bounds(const Polygon& polygon);

struct OverlapCounts {
  std::uint64_t intersection = 0;
  std::uint64_t union_ = 0;
  std::uint64_t area_a = 0;
  std::uint64_t area_b = 0;
};

/// Run-merge overlap of two equally sized RLE masks.
OverlapCounts rle_overlap(const Rle& a, const Rle& b);

}  // namespace xami

#endif  // XAMI_MASK_HPP_
