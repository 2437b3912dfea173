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

#include "xami/mask.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "xami/error.hpp"

namespace xami {

std::uint64_t Rle::area() const noexcept {
  std::uint64_t a = 0;
  for (std::size_t i = 1; i < counts.size(); i += 2) a += counts[i];
  return a;
}

std::uint64_t Bitmap::count() const noexcept {
  return static_cast<std::uint64_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

namespace {

constexpr double kVertexSlack = 1.0;

struct RowWindow {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
  bool empty = true;
};

RowWindow row_window(const Polygon& polygon, std::size_t height) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& ring : polygon.rings)
    for (const auto& p : ring) {
      lo = std::min(lo, p.y);
      hi = std::max(hi, p.y);
    }
  RowWindow win;
  if (height == 0 || !(lo <= hi)) return win;
  const double first = std::max(0.0, std::floor(lo - 0.5));
  const double last = std::min(static_cast<double>(height) - 1.0, std::ceil(hi));
  if (first > last) return win;
  win.first = static_cast<std::size_t>(first);
  win.last = static_cast<std::size_t>(last);
  win.empty = false;
  return win;
}

// Calls emit(row, col_begin, col_end) for every half-open span of pixel
// centres inside one ring, ring by ring. Spans of different rings may overlap.
template <typename Emit>
void for_each_span(const Polygon& polygon, std::size_t height, std::size_t width, Emit&& emit) {
  const RowWindow win = row_window(polygon, height);
  if (win.empty || width == 0) return;
  std::vector<double> xs;
  for (const auto& ring : polygon.rings) {
    const std::size_t n = ring.size();
    if (n < 3) continue;
    for (std::size_t r = win.first; r <= win.last; ++r) {
      const double y = static_cast<double>(r) + 0.5;
      xs.clear();
      for (std::size_t i = 0; i < n; ++i) {
        const Point& a = ring[i];
        const Point& b = ring[(i + 1) % n];
        if ((a.y <= y) == (b.y <= y)) continue;
        xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
      }
      std::sort(xs.begin(), xs.end());
      for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
        const double begin = std::max(0.0, std::ceil(xs[i] - 0.5));
        const double end = std::min(static_cast<double>(width), std::ceil(xs[i + 1] - 0.5));
        if (begin < end)
          emit(r, static_cast<std::size_t>(begin), static_cast<std::size_t>(end));
      }
    }
  }
}

// Appends runs in increasing column-major order, merging adjacent ones.
class RunBuilder {
 public:
  explicit RunBuilder(std::size_t total) : total_(total) {}

  void add_ones(std::uint64_t start, std::uint64_t length) {
    if (length == 0) return;
    if (start == cursor_ && !counts_.empty() && counts_.size() % 2 == 0) {
      counts_.back() += static_cast<std::uint32_t>(length);
    } else {
      counts_.push_back(static_cast<std::uint32_t>(start - cursor_));
      counts_.push_back(static_cast<std::uint32_t>(length));
    }
    cursor_ = start + length;
  }

  std::vector<std::uint32_t> finish() {
    if (counts_.empty() || cursor_ < total_)
      counts_.push_back(static_cast<std::uint32_t>(total_ - cursor_));
    return std::move(counts_);
  }

 private:
  std::uint64_t total_;
  std::uint64_t cursor_ = 0;
  std::vector<std::uint32_t> counts_;
};

Rle polygon_to_rle(const Polygon& polygon, std::size_t height, std::size_t width) {
  Rle rle{height, width, {}};
  RunBuilder runs(height * width);
  const RowWindow win = row_window(polygon, height);
  if (!win.empty && width > 0) {
    // Local column-major raster of the occupied row band.
    const std::size_t band = win.last - win.first + 1;
    std::size_t col_lo = width, col_hi = 0;
    std::vector<std::uint8_t> local(band * width, 0);
    for_each_span(polygon, height, width, [&](std::size_t r, std::size_t c0, std::size_t c1) {
      for (std::size_t c = c0; c < c1; ++c) local[c * band + (r - win.first)] = 1;
      col_lo = std::min(col_lo, c0);
      col_hi = std::max(col_hi, c1);
    });
    for (std::size_t c = col_lo; c < col_hi; ++c) {
      const std::uint8_t* col = local.data() + c * band;
      std::size_t r = 0;
      while (r < band) {
        if (!col[r]) {
          ++r;
          continue;
        }
        std::size_t e = r;
        while (e < band && col[e]) ++e;
        runs.add_ones(static_cast<std::uint64_t>(c) * height + win.first + r, e - r);
        r = e;
      }
    }
  }
  rle.counts = runs.finish();
  return rle;
}

void check_canvas(const char* what, std::size_t h, std::size_t w, std::size_t eh, std::size_t ew) {
  if (h != eh || w != ew) {
    throw InvalidArgument(std::string(what) + ": mask is " + std::to_string(h) + "x" +
                          std::to_string(w) + ", canvas is " + std::to_string(eh) + "x" +
                          std::to_string(ew));
  }
}

}  // namespace

InstanceMask InstanceMask::from_polygon(Polygon polygon, std::size_t height, std::size_t width) {
  if (polygon.rings.empty()) throw InvalidArgument("polygon has no rings");
  const double w = static_cast<double>(width), h = static_cast<double>(height);
  for (const auto& ring : polygon.rings) {
    if (ring.size() < 3)
      throw InvalidArgument("polygon ring has " + std::to_string(ring.size()) +
                            " vertices, need at least 3");
    for (const auto& p : ring) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw InvalidArgument("polygon vertex is not finite");
      if (p.x < -kVertexSlack || p.x > w + kVertexSlack || p.y < -kVertexSlack ||
          p.y > h + kVertexSlack) {
        throw InvalidArgument("polygon vertex (" + std::to_string(p.x) + ", " +
                              std::to_string(p.y) + ") outside " + std::to_string(width) +
                              "x" + std::to_string(height) + " canvas");
      }
    }
  }
  InstanceMask m;
  m.height_ = height;
  m.width_ = width;
  m.encoding_ = std::move(polygon);
  return m;
}

InstanceMask InstanceMask::from_rle(Rle rle) {
  validate_rle(rle);
  InstanceMask m;
  m.height_ = rle.height;
  m.width_ = rle.width;
  m.encoding_ = std::move(rle);
  return m;
}

InstanceMask InstanceMask::from_bitmap(Bitmap bitmap) {
  InstanceMask m;
  m.height_ = bitmap.height();
  m.width_ = bitmap.width();
  m.encoding_ = std::move(bitmap);
  return m;
}

InstanceMask InstanceMask::from_box(const BBox& box, std::size_t height, std::size_t width) {
  if (!std::isfinite(box.x) || !std::isfinite(box.y) || !std::isfinite(box.w) ||
      !std::isfinite(box.h) || box.w < 0.0 || box.h < 0.0)
    throw InvalidArgument("box must be finite with non-negative size");
  const double x0 = std::clamp(box.x, 0.0, static_cast<double>(width));
  const double y0 = std::clamp(box.y, 0.0, static_cast<double>(height));
  const double x1 = std::clamp(box.x + box.w, 0.0, static_cast<double>(width));
  const double y1 = std::clamp(box.y + box.h, 0.0, static_cast<double>(height));
  Polygon p{{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}}};
  return from_polygon(std::move(p), height, width);
}

Bitmap InstanceMask::to_bitmap() const { return rasterize(*this, height_, width_); }

Rle InstanceMask::to_rle() const {
  return std::visit(
      [this](const auto& enc) -> Rle {
        using T = std::decay_t<decltype(enc)>;
        if constexpr (std::is_same_v<T, Polygon>) {
          return polygon_to_rle(enc, height_, width_);
        } else if constexpr (std::is_same_v<T, Rle>) {
          return enc;
        } else {
          return rle_encode(enc);
        }
      },
      encoding_);
}

std::uint64_t InstanceMask::area() const {
  if (const auto* rle = std::get_if<Rle>(&encoding_)) return rle->area();
  if (const auto* bm = std::get_if<Bitmap>(&encoding_)) return bm->count();
  return to_rle().area();
}

Bitmap rasterize(const Polygon& polygon, std::size_t height, std::size_t width) {
  Bitmap out(height, width);
  for_each_span(polygon, height, width, [&](std::size_t r, std::size_t c0, std::size_t c1) {
    for (std::size_t c = c0; c < c1; ++c) out.set(r, c);
  });
  return out;
}

Bitmap rasterize(const InstanceMask& mask, std::size_t height, std::size_t width) {
  return std::visit(
      [&](const auto& enc) -> Bitmap {
        using T = std::decay_t<decltype(enc)>;
        if constexpr (std::is_same_v<T, Polygon>) {
          for (const auto& ring : enc.rings)
            for (const auto& p : ring)
              if (p.x < -kVertexSlack || p.x > static_cast<double>(width) + kVertexSlack ||
                  p.y < -kVertexSlack || p.y > static_cast<double>(height) + kVertexSlack)
                throw InvalidArgument("rasterize: polygon vertex outside canvas");
          return rasterize(enc, height, width);
        } else if constexpr (std::is_same_v<T, Rle>) {
          check_canvas("rasterize", enc.height, enc.width, height, width);
          return rle_decode(enc);
        } else {
          check_canvas("rasterize", enc.height(), enc.width(), height, width);
          return enc;
        }
      },
      mask.encoding());
}

Rle rle_encode(const Bitmap& bitmap) {
  Rle rle{bitmap.height(), bitmap.width(), {}};
  const std::size_t h = bitmap.height(), w = bitmap.width();
  std::uint32_t run = 0;
  bool current = false;
  for (std::size_t c = 0; c < w; ++c) {
    for (std::size_t r = 0; r < h; ++r) {
      const bool v = bitmap.get(r, c);
      if (v != current) {
        rle.counts.push_back(run);
        run = 0;
        current = v;
      }
      ++run;
    }
  }
  rle.counts.push_back(run);
  return rle;
}

void validate_rle(const Rle& rle) {
  std::uint64_t sum = 0;
  for (auto c : rle.counts) sum += c;
  const std::uint64_t expected = static_cast<std::uint64_t>(rle.height) * rle.width;
  if (sum != expected) {
    throw InvalidArgument("RLE counts sum to " + std::to_string(sum) + ", expected " +
                          std::to_string(expected) + " for size [" + std::to_string(rle.height) +
                          ", " + std::to_string(rle.width) + "]");
  }
}

Bitmap rle_decode(const Rle& rle) {
  validate_rle(rle);
  Bitmap out(rle.height, rle.width);
  std::uint64_t pos = 0;
  bool value = false;
  for (auto n : rle.counts) {
    if (value) {
      for (std::uint64_t i = pos; i < pos + n; ++i) out.set(i % rle.height, i / rle.height);
    }
    pos += n;
    value = !value;
  }
  return out;
}

BBox bbox_of(const Bitmap& bitmap) {
  std::size_t r0 = bitmap.height(), r1 = 0, c0 = bitmap.width(), c1 = 0;
  bool any = false;
  for (std::size_t r = 0; r < bitmap.height(); ++r)
    for (std::size_t c = 0; c < bitmap.width(); ++c)
      if (bitmap.get(r, c)) {
        any = true;
        r0 = std::min(r0, r);
        r1 = std::max(r1, r);
        c0 = std::min(c0, c);
        c1 = std::max(c1, c);
      }
  if (!any) throw InvalidArgument("bbox_of: empty mask");
  return {static_cast<double>(c0), static_cast<double>(r0), static_cast<double>(c1 - c0 + 1),
          static_cast<double>(r1 - r0 + 1)};
}

BBox bbox_of(const Rle& rle) {
  const std::uint64_t h = rle.height;
  std::uint64_t r0 = h, r1 = 0, c0 = rle.width, c1 = 0, pos = 0;
  bool any = false;
  for (std::size_t i = 0; i < rle.counts.size(); ++i) {
    const std::uint64_t n = rle.counts[i];
    if (i % 2 == 1 && n > 0) {
      any = true;
      const std::uint64_t first = pos, last = pos + n - 1;
      const std::uint64_t fc = first / h, lc = last / h;
      c0 = std::min(c0, fc);
      c1 = std::max(c1, lc);
      if (fc == lc) {
        r0 = std::min(r0, first % h);
        r1 = std::max(r1, last % h);
      } else {
        r0 = 0;
        r1 = h - 1;
      }
    }
    pos += n;
  }
  if (!any) throw InvalidArgument("bbox_of: empty mask");
  return {static_cast<double>(c0), static_cast<double>(r0), static_cast<double>(c1 - c0 + 1),
          static_cast<double>(r1 - r0 + 1)};
}

BBox bbox_of(const InstanceMask& mask) {
  if (const auto* bm = std::get_if<Bitmap>(&mask.encoding())) return bbox_of(*bm);
  return bbox_of(mask.to_rle());
}

BBox vertex_bounds(const Polygon& polygon) {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const auto& ring : polygon.rings)
    for (const auto& p : ring) {
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
  if (!(x0 <= x1)) throw InvalidArgument("vertex_bounds: polygon has no vertices");
  return {x0, y0, x1 - x0, y1 - y0};
}

OverlapCounts rle_overlap(const Rle& a, const Rle& b) {
  check_canvas("rle_overlap", a.height, a.width, b.height, b.width);
  OverlapCounts out;
  std::size_t ia = 0, ib = 0;
  std::uint64_t ra = a.counts.empty() ? 0 : a.counts[0];
  std::uint64_t rb = b.counts.empty() ? 0 : b.counts[0];
  bool va = false, vb = false;
  // Skip leading empty runs.
  auto advance = [](const Rle& m, std::size_t& i, std::uint64_t& rem, bool& v) {
    while (rem == 0 && i + 1 < m.counts.size()) {
      rem = m.counts[++i];
      v = !v;
    }
  };
  advance(a, ia, ra, va);
  advance(b, ib, rb, vb);
  while (ra > 0 && rb > 0) {
    const std::uint64_t step = std::min(ra, rb);
    if (va) out.area_a += step;
    if (vb) out.area_b += step;
    if (va && vb) out.intersection += step;
    if (va || vb) out.union_ += step;
    ra -= step;
    rb -= step;
    advance(a, ia, ra, va);
    advance(b, ib, rb, vb);
  }
  return out;
}

}  // namespace xami
