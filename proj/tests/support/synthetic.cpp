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

#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "xami/coco.hpp"
#include "xami/mask.hpp"

namespace xami::testing {
namespace {

constexpr std::size_t kCanvas = 512;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::vector<Point> ellipse(double cx, double cy, double a, double b, double angle, int vertices) {
  std::vector<Point> ring;
  const double ca = std::cos(angle), sa = std::sin(angle);
  for (int i = 0; i < vertices; ++i) {
    const double t = 2.0 * std::numbers::pi * i / vertices;
    const double x = a * std::cos(t), y = b * std::sin(t);
    ring.push_back({cx + x * ca - y * sa, cy + x * sa + y * ca});
  }
  return ring;
}

void clamp_to_canvas(Polygon& p, std::size_t height, std::size_t width) {
  for (auto& ring : p.rings)
    for (auto& v : ring) {
      v.x = std::clamp(v.x, 0.0, static_cast<double>(width));
      v.y = std::clamp(v.y, 0.0, static_cast<double>(height));
    }
}

Annotation make_annotation(std::int64_t id, std::int64_t image_id, ArtefactClass cls, InstanceMask mask) {
  Annotation a;
  a.id = id;
  a.image_id = image_id;
  a.cls = cls;
  a.bbox = bbox_of(mask);
  a.area = static_cast<double>(mask.area());
  a.mask = std::move(mask);
  return a;
}

// Translates a mask by whole pixels (RLE/bitmap) or fractional offsets
// (polygon); returns nullopt when nothing is left on the canvas.
std::optional<InstanceMask> shifted(const InstanceMask& m, double dx, double dy) {
  const std::size_t h = m.height(), w = m.width();
  if (m.is_polygon()) {
    Polygon p = std::get<Polygon>(m.encoding());
    for (auto& ring : p.rings)
      for (auto& v : ring) {
        v.x += dx;
        v.y += dy;
      }
    clamp_to_canvas(p, h, w);
    auto out = InstanceMask::from_polygon(std::move(p), h, w);
    if (out.area() == 0) return std::nullopt;
    return out;
  }
  const Bitmap src = m.to_bitmap();
  Bitmap dst(h, w);
  const long ix = std::lround(dx), iy = std::lround(dy);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) {
      if (!src.get(r, c)) continue;
      const long rr = static_cast<long>(r) + iy, cc = static_cast<long>(c) + ix;
      if (rr >= 0 && cc >= 0 && rr < static_cast<long>(h) && cc < static_cast<long>(w)) dst.set(rr, cc);
    }
  if (dst.count() == 0) return std::nullopt;
  return InstanceMask::from_rle(rle_encode(dst));
}

}  // namespace

Polygon random_shape(ArtefactClass cls, std::size_t height, std::size_t width, std::mt19937_64& rng) {
  const double w = static_cast<double>(width), h = static_cast<double>(height);
  const double s = std::min(w, h) / static_cast<double>(kCanvas);
  Polygon p;
  switch (cls) {
    case ArtefactClass::kCR: {
      const double r = uniform(rng, 40, 80) * s;
      p.rings.push_back(ellipse(w / 2 + uniform(rng, -20, 20) * s, h / 2 + uniform(rng, -20, 20) * s, r,
                                r * uniform(rng, 0.9, 1.0), uniform(rng, 0, std::numbers::pi), 48));
      break;
    }
    case ArtefactClass::kSR: {
      const double r = uniform(rng, 8, 40) * s;
      p.rings.push_back(ellipse(uniform(rng, r, w - r), uniform(rng, r, h - r), r, r, 0.0, 32));
      break;
    }
    case ArtefactClass::kSL: {
      const double a = uniform(rng, 30, 110) * s, b = uniform(rng, 5, 18) * s;
      p.rings.push_back(ellipse(uniform(rng, 0.15 * w, 0.85 * w), uniform(rng, 0.15 * h, 0.85 * h), a, b,
                                uniform(rng, 0, std::numbers::pi), 40));
      break;
    }
    case ArtefactClass::kROS: {
      const double half = uniform(rng, 1.0, 3.0) * s;
      const double x = uniform(rng, half + 1, w - half - 1);
      const double y0 = uniform(rng, 0, 0.5 * h), y1 = std::min(h, y0 + uniform(rng, 0.2, 1.0) * h);
      p.rings.push_back({{x - half, y0}, {x + half, y0}, {x + half, y1}, {x - half, y1}});
      break;
    }
    case ArtefactClass::kOther: {
      const double r = uniform(rng, 6, 30) * s;
      const double cx = uniform(rng, r, w - r), cy = uniform(rng, r, h - r);
      std::vector<Point> ring;
      for (int i = 0; i < 9; ++i) {
        const double t = 2.0 * std::numbers::pi * i / 9, rr = r * uniform(rng, 0.5, 1.0);
        ring.push_back({cx + rr * std::cos(t), cy + rr * std::sin(t)});
      }
      p.rings.push_back(std::move(ring));
      break;
    }
  }
  clamp_to_canvas(p, height, width);
  return p;
}

namespace {

// Shapes for `labels` spread over `images`, `masks_per_image[i]` each.
Dataset populate(std::vector<ImageRecord> images, const std::vector<std::size_t>& masks_per_image,
                 std::vector<ArtefactClass> labels, std::mt19937_64& rng) {
  std::shuffle(labels.begin(), labels.end(), rng);
  std::vector<Annotation> anns;
  anns.reserve(labels.size());
  std::bernoulli_distribution as_rle(0.2);
  std::size_t next = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t m = 0; m < masks_per_image[i]; ++m) {
      const ArtefactClass cls = labels[next++];
      InstanceMask mask;
      do {
        mask = InstanceMask::from_polygon(random_shape(cls, kCanvas, kCanvas, rng), kCanvas, kCanvas);
      } while (mask.area() == 0);
      if (as_rle(rng)) mask = InstanceMask::from_rle(mask.to_rle());
      anns.push_back(make_annotation(static_cast<std::int64_t>(anns.size()) + 1, images[i].id, cls, std::move(mask)));
    }
  }
  return Dataset(std::move(images), std::move(anns));
}

ImageRecord image_record(std::int64_t id, FilterName filter) {
  ImageRecord img;
  img.id = id;
  char name[64];
  std::snprintf(name, sizeof name, "S%010lld_%s.png", static_cast<long long>(100000 + id * 7),
                std::string(filter_band(filter).label).c_str());
  img.file_name = name;
  img.width = kCanvas;
  img.height = kCanvas;
  img.filter = filter;
  return img;
}

// At least one mask per image, the rest spread uniformly.
std::vector<std::size_t> spread(std::size_t images, std::size_t masks, std::mt19937_64& rng) {
  std::vector<std::size_t> counts(images, 1);
  std::uniform_int_distribution<std::size_t> pick(0, images - 1);
  for (std::size_t m = images; m < masks; ++m) ++counts[pick(rng)];
  return counts;
}

std::vector<ArtefactClass> published_labels() {
  std::vector<ArtefactClass> labels;
  for (ArtefactClass c : kAllClasses) labels.insert(labels.end(), kPublishedClassTotals[class_index(c)], c);
  return labels;
}

}  // namespace

Dataset published_surrogate(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ImageRecord> images;
  std::vector<std::size_t> masks_per_image;
  for (const auto& fc : kPublishedFilterCounts) {
    for (std::size_t n : spread(fc.images, fc.masks, rng)) {
      images.push_back(image_record(static_cast<std::int64_t>(images.size()) + 1, fc.filter));
      masks_per_image.push_back(n);
    }
  }
  return populate(std::move(images), masks_per_image, published_labels(), rng);
}

Dataset throughput_dataset(std::size_t images, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ImageRecord> records;
  std::uniform_int_distribution<std::size_t> band(0, kPublishedFilterCounts.size() - 1);
  for (std::size_t i = 0; i < images; ++i)
    records.push_back(image_record(static_cast<std::int64_t>(i) + 1, kPublishedFilterCounts[band(rng)].filter));
  return populate(std::move(records), spread(images, kPublishedMaskTotal, rng), published_labels(), rng);
}

Dataset published_dataset(std::string* source) {
  if (const char* path = std::getenv(kPublishedGtEnv); path && *path) {
    if (source) *source = std::string("published file ") + path;
    return parse_coco_groundtruth(read_text_file(path));
  }
  if (source) *source = "synthetic surrogate with the published per-filter and per-class counts";
  return published_surrogate();
}

Dataset noisy_predictions(const Dataset& gt, std::uint64_t seed, double keep, double jitter, double spurious) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution kept(keep), relabel(0.05);
  std::uniform_real_distribution<double> score(0.3, 1.0);
  std::uniform_int_distribution<std::size_t> any_class(0, kNumClasses - 1);
  std::poisson_distribution<int> extra(spurious);
  std::vector<Annotation> out;
  auto push = [&](std::int64_t image_id, ArtefactClass cls, InstanceMask mask) {
    Annotation a = make_annotation(static_cast<std::int64_t>(out.size()) + 1, image_id, cls, std::move(mask));
    a.score = score(rng);
    out.push_back(std::move(a));
  };
  for (const auto& img : gt.images()) {
    for (auto k : gt.annotations_of(img.id)) {
      const Annotation& g = gt.annotations()[k];
      if (!kept(rng)) continue;
      const double dx = uniform(rng, -jitter, jitter), dy = uniform(rng, -jitter, jitter);
      auto m = shifted(g.mask, dx, dy);
      if (!m) continue;
      const ArtefactClass cls = relabel(rng) ? kAllClasses[any_class(rng)] : g.cls;
      push(img.id, cls, std::move(*m));
    }
    for (int e = extra(rng); e > 0; --e) {
      const ArtefactClass cls = kAllClasses[any_class(rng)];
      auto m = InstanceMask::from_polygon(random_shape(cls, img.height, img.width, rng), img.height, img.width);
      if (m.area() > 0) push(img.id, cls, std::move(m));
    }
  }
  Dataset ds(gt.images(), std::move(out));
  ds.set_source_categories(gt.source_categories());
  return ds;
}

Dataset as_predictions(const Dataset& gt) {
  std::vector<Annotation> anns = gt.annotations();
  for (auto& a : anns) a.score = 1.0;
  Dataset ds(gt.images(), std::move(anns));
  ds.set_source_categories(gt.source_categories());
  return ds;
}

PixelGrid noise_image(std::size_t width, std::size_t height, double mean, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(mean, sigma);
  PixelGrid g(width, height);
  for (double& v : g.values()) v = noise(rng);
  return g;
}

TempDir::TempDir(const std::string& tag) {
  std::random_device rd;
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    path_ = base / ("xami_" + tag + "_" + std::to_string(rd()));
    if (std::filesystem::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace xami::testing
