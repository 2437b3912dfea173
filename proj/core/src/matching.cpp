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

#include "xami/matching.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "json.hpp"
#include "xami/error.hpp"
#include "xami/parallel.hpp"

namespace xami {
namespace {

bool boxes_overlap(const BBox& a, const BBox& b) {
  return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
}

std::optional<BBox> rle_box(const Rle& rle) {
  if (rle.area() == 0) return std::nullopt;
  return bbox_of(rle);
}

double median_of(std::vector<double>& v) {
  const std::size_t n = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

double population_std(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace

double iou(const Rle& a, const Rle& b) {
  const OverlapCounts o = rle_overlap(a, b);
  if (o.union_ == 0) throw InvalidArgument("iou: both masks are empty");
  return static_cast<double>(o.intersection) / static_cast<double>(o.union_);
}

double iou(const InstanceMask& a, const InstanceMask& b) {
  if (a.height() != b.height() || a.width() != b.width())
    throw InvalidArgument("iou: masks are on different canvases");
  return iou(a.to_rle(), b.to_rle());
}

CostMatrix iou_matrix(std::span<const Rle> preds, std::span<const Rle> gts) {
  CostMatrix m(preds.size(), gts.size(), 0.0);
  std::vector<std::optional<BBox>> gt_boxes;
  gt_boxes.reserve(gts.size());
  for (const auto& g : gts) gt_boxes.push_back(rle_box(g));
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto pb = rle_box(preds[i]);
    if (!pb) continue;
    for (std::size_t j = 0; j < gts.size(); ++j) {
      if (!gt_boxes[j] || !boxes_overlap(*pb, *gt_boxes[j])) continue;
      const OverlapCounts o = rle_overlap(preds[i], gts[j]);
      m.at(i, j) = static_cast<double>(o.intersection) / static_cast<double>(o.union_);
    }
  }
  return m;
}

MatchResult match_instances(std::span<const Annotation> preds, std::span<const Rle> pred_rles,
                            std::span<const Annotation> gts, std::span<const Rle> gt_rles,
                            const MatchOptions& options) {
  if (!(options.iou_threshold > 0.0 && options.iou_threshold <= 1.0))
    throw InvalidArgument("match_instances: iou_threshold must be in (0, 1]");
  if (pred_rles.size() != preds.size() || gt_rles.size() != gts.size())
    throw InvalidArgument("match_instances: mask list size mismatch");

  MatchResult result;
  result.iou_threshold = options.iou_threshold;
  bool have_id = false;
  for (const auto* list : {&preds, &gts}) {
    for (const auto& a : *list) {
      if (!have_id) {
        result.image_id = a.image_id;
        have_id = true;
      } else if (a.image_id != result.image_id) {
        throw InvalidArgument("match_instances: annotations from images " +
                              std::to_string(result.image_id) + " and " + std::to_string(a.image_id));
      }
    }
  }

  const CostMatrix ious = iou_matrix(pred_rles, gt_rles);
  CostMatrix cost(preds.size(), gts.size(), 1.0);
  for (std::size_t i = 0; i < preds.size(); ++i)
    for (std::size_t j = 0; j < gts.size(); ++j)
      if (!options.class_aware || preds[i].cls == gts[j].cls) cost.at(i, j) = 1.0 - ious.at(i, j);

  std::vector<char> pred_used(preds.size(), 0), gt_used(gts.size(), 0);
  for (const auto& a : kuhn_munkres(cost)) {
    const double v = ious.at(a.row, a.col);
    const bool same_class = preds[a.row].cls == gts[a.col].cls;
    if (v < options.iou_threshold || (options.class_aware && !same_class)) continue;
    result.pairs.push_back({a.row, a.col, v});
    pred_used[a.row] = 1;
    gt_used[a.col] = 1;
  }
  for (std::size_t i = 0; i < preds.size(); ++i)
    if (!pred_used[i]) result.false_positives.push_back(i);
  for (std::size_t j = 0; j < gts.size(); ++j)
    if (!gt_used[j]) result.false_negatives.push_back(j);
  return result;
}

MatchResult match_instances(std::span<const Annotation> preds, std::span<const Annotation> gts,
                            const MatchOptions& options) {
  std::vector<Rle> pr, gr;
  pr.reserve(preds.size());
  gr.reserve(gts.size());
  for (const auto& p : preds) pr.push_back(p.mask.to_rle());
  for (const auto& g : gts) gr.push_back(g.mask.to_rle());
  for (const auto& p : pr)
    for (const auto& g : gr)
      if (p.height != g.height || p.width != g.width)
        throw InvalidArgument("match_instances: masks are on different canvases");
  return match_instances(preds, pr, gts, gr, options);
}

std::vector<MatchResult> match_dataset(const Dataset& groundtruth, const Dataset& predictions,
                                       const MatchOptions& options, std::size_t jobs) {
  for (const auto& p : predictions.annotations())
    if (!groundtruth.find_image(p.image_id))
      throw InvalidArgument("match_dataset: prediction " + std::to_string(p.id) +
                            " refers to image " + std::to_string(p.image_id) +
                            " absent from the ground truth");
  const auto& images = groundtruth.images();
  std::vector<MatchResult> out(images.size());
  parallel_for(images.size(), jobs, [&](std::size_t i) {
    const auto id = images[i].id;
    std::vector<Annotation> gts, preds;
    for (auto k : groundtruth.annotations_of(id)) gts.push_back(groundtruth.annotations()[k]);
    for (auto k : predictions.annotations_of(id)) preds.push_back(predictions.annotations()[k]);
    out[i] = match_instances(preds, gts, options);
    out[i].image_id = id;
  });
  return out;
}

BackgroundStats background_stats(const PixelGrid& grid, double k_clip, std::size_t iterations) {
  if (!(k_clip > 0.0)) throw InvalidArgument("background_stats: k_clip must be > 0");
  std::vector<double> kept;
  kept.reserve(grid.size());
  for (double v : grid.values())
    if (std::isfinite(v)) kept.push_back(v);
  if (kept.size() < 5)
    throw InvalidArgument("background_stats: need at least 5 finite pixels, got " +
                          std::to_string(kept.size()));

  BackgroundStats bg;
  bg.k_clip = k_clip;
  bg.iterations = iterations;
  std::vector<double> scratch;
  for (std::size_t it = 0; it < iterations; ++it) {
    scratch = kept;
    const double median = median_of(scratch);
    const double sigma = population_std(kept);
    const double lo = median - k_clip * sigma, hi = median + k_clip * sigma;
    std::vector<double> next;
    next.reserve(kept.size());
    for (double v : kept)
      if (v >= lo && v <= hi) next.push_back(v);
    if (next.empty()) throw InvalidArgument("background_stats: every pixel was rejected");
    if (next.size() == kept.size()) break;
    kept = std::move(next);
  }
  scratch = kept;
  bg.median = median_of(scratch);
  bg.sigma = population_std(kept);
  return bg;
}

bool is_faint(const InstanceMask& mask, const PixelGrid& grid, const BackgroundStats& bg) {
  if (mask.height() != grid.height() || mask.width() != grid.width())
    throw InvalidArgument("is_faint: mask and image sizes differ");
  const Rle rle = mask.to_rle();
  const std::size_t h = rle.height;
  double sum = 0.0;
  std::uint64_t n = 0, pos = 0;
  for (std::size_t i = 0; i < rle.counts.size(); ++i) {
    const std::uint64_t len = rle.counts[i];
    if (i % 2 == 1) {
      for (std::uint64_t k = pos; k < pos + len; ++k) sum += grid.at(k % h, k / h);
      n += len;
    }
    pos += len;
  }
  if (n == 0) throw InvalidArgument("is_faint: empty mask");
  return sum / static_cast<double>(n) <= bg.median + kFaintSigma * bg.sigma;
}

bool fusion_applies_to(ArtefactClass cls) noexcept {
  return cls == ArtefactClass::kSL || cls == ArtefactClass::kOther;
}

const InstanceMask& fuse_masks(const InstanceMask& detector_mask, const InstanceMask& segmenter_mask,
                               ArtefactClass cls, const PixelGrid& grid, const BackgroundStats& bg) {
  if (detector_mask.height() != segmenter_mask.height() || detector_mask.width() != segmenter_mask.width())
    throw InvalidArgument("fuse_masks: detector and segmenter masks are on different canvases");
  if (segmenter_mask.height() != grid.height() || segmenter_mask.width() != grid.width())
    throw InvalidArgument("fuse_masks: masks and image sizes differ");
  if (fusion_applies_to(cls) && is_faint(segmenter_mask, grid, bg)) return detector_mask;
  return segmenter_mask;
}

Annotation fuse_prediction(const Annotation& pred, const PixelGrid& grid, const BackgroundStats& bg) {
  Annotation out = pred;
  const InstanceMask detector = InstanceMask::from_box(pred.bbox, pred.mask.height(), pred.mask.width());
  if (detector == pred.mask) return out;
  if (pred.mask.area() == 0) return out;
  if (&fuse_masks(detector, pred.mask, pred.cls, grid, bg) == &detector) {
    out.mask = detector;
    out.area = static_cast<double>(detector.area());
  }
  return out;
}

std::string match_record_json(const MatchResult& m, std::span<const Annotation> preds,
                              std::span<const Annotation> gts) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["image_id"] = m.image_id;
  j["iou_threshold"] = m.iou_threshold;
  ordered_json pairs = ordered_json::array();
  for (const auto& p : m.pairs)
    pairs.push_back({{"pred_id", preds[p.pred].id},
                     {"gt_id", gts[p.gt].id},
                     {"pred_index", p.pred},
                     {"gt_index", p.gt},
                     {"iou", p.iou}});
  ordered_json fps = ordered_json::array();
  for (auto i : m.false_positives) fps.push_back({{"pred_id", preds[i].id}, {"pred_index", i}});
  ordered_json fns = ordered_json::array();
  for (auto i : m.false_negatives) fns.push_back({{"gt_id", gts[i].id}, {"gt_index", i}});
  j["pairs"] = std::move(pairs);
  j["false_positives"] = std::move(fps);
  j["false_negatives"] = std::move(fns);
  return j.dump();
}

MatchResult parse_match_record(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    MatchResult m;
    m.image_id = j.at("image_id").get<std::int64_t>();
    m.iou_threshold = j.at("iou_threshold").get<double>();
    for (const auto& p : j.at("pairs"))
      m.pairs.push_back({p.at("pred_index").get<std::size_t>(), p.at("gt_index").get<std::size_t>(),
                         p.at("iou").get<double>()});
    for (const auto& f : j.at("false_positives")) m.false_positives.push_back(f.at("pred_index").get<std::size_t>());
    for (const auto& f : j.at("false_negatives")) m.false_negatives.push_back(f.at("gt_index").get<std::size_t>());
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("match record: ") + e.what());
  }
}

}  // namespace xami
