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

#include "xami/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xami/error.hpp"

namespace xami {

Counts ConfusionCounts::overall() const noexcept {
  Counts total;
  for (const auto& c : per_class_) total += c;
  return total;
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) noexcept {
  for (std::size_t i = 0; i < kNumClasses; ++i) per_class_[i] += o.per_class_[i];
  return *this;
}

ConfusionCounts count_matches(const MatchResult& m, std::span<const Annotation> preds,
                              std::span<const Annotation> gts) {
  ConfusionCounts c;
  for (const auto& p : m.pairs) ++c[gts[p.gt].cls].tp;
  for (auto i : m.false_positives) ++c[preds[i].cls].fp;
  for (auto j : m.false_negatives) ++c[gts[j].cls].fn;
  return c;
}

PrecisionRecall precision_recall(const Counts& c) noexcept {
  PrecisionRecall pr;
  const auto tp = static_cast<double>(c.tp);
  if (c.tp + c.fp > 0) pr.precision = 100.0 * tp / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) pr.recall = 100.0 * tp / static_cast<double>(c.tp + c.fn);
  return pr;
}

IouDistribution iou_distribution(std::span<const MatchResult> matches) {
  IouDistribution d;
  for (const auto& m : matches) {
    const std::size_t instances = m.pairs.size() + m.false_positives.size() + m.false_negatives.size();
    double sum = 0.0;
    for (const auto& p : m.pairs) {
      d.samples.push_back(p.iou);
      sum += p.iou;
    }
    if (instances == 0) continue;
    d.image_ids.push_back(m.image_id);
    d.per_image_means.push_back(sum / static_cast<double>(instances));
  }
  if (d.samples.empty()) throw InvalidArgument("iou_distribution: no matched pairs");
  std::sort(d.samples.begin(), d.samples.end());
  const std::size_t n = d.samples.size();
  d.cumulative.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    d.cumulative[i] = static_cast<double>(i + 1) / static_cast<double>(n);

  double mean = 0.0;
  for (double v : d.per_image_means) mean += v;
  mean /= static_cast<double>(d.per_image_means.size());
  double ss = 0.0;
  for (double v : d.per_image_means) ss += (v - mean) * (v - mean);
  d.mean = mean;
  d.std = std::sqrt(ss / static_cast<double>(d.per_image_means.size()));
  return d;
}

namespace {

void check_dims(const char* what, const PixelGrid& prob, const Bitmap& gt) {
  if (prob.width() != gt.width() || prob.height() != gt.height())
    throw InvalidArgument(std::string(what) + ": prediction is " + std::to_string(prob.height()) + "x" +
                          std::to_string(prob.width()) + ", target is " + std::to_string(gt.height()) +
                          "x" + std::to_string(gt.width()));
}

double focal_term(double p, bool fg, double gamma, double alpha) {
  p = std::clamp(p, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
  const double pt = fg ? p : 1.0 - p;
  const double at = fg ? alpha : 1.0 - alpha;
  return -at * std::pow(1.0 - pt, gamma) * std::log(pt);
}

}  // namespace

double dice_loss(const PixelGrid& prob, const Bitmap& gt) {
  check_dims("dice_loss", prob, gt);
  double inter = 0.0, sp = 0.0, sg = 0.0;
  const auto& bits = gt.data();
  auto p = prob.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || p[i] > 1.0) throw InvalidArgument("dice_loss: probability outside [0, 1]");
    sp += p[i];
    if (bits[i]) {
      sg += 1.0;
      inter += p[i];
    }
  }
  if (sp + sg == 0.0) return 0.0;
  return 1.0 - 2.0 * inter / (sp + sg);
}

double focal_loss(const PixelGrid& prob, const Bitmap& gt, double gamma, double alpha) {
  check_dims("focal_loss", prob, gt);
  if (prob.empty()) return 0.0;
  const auto& bits = gt.data();
  auto p = prob.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += focal_term(p[i], bits[i] != 0, gamma, alpha);
  return sum / static_cast<double>(p.size());
}

double weighted_loss(double focal, double dice) noexcept { return kFocalWeight * focal + kDiceWeight * dice; }

double combined_loss(const PixelGrid& prob, const Bitmap& gt) {
  return weighted_loss(focal_loss(prob, gt), dice_loss(prob, gt));
}

PixelConfusion pixel_confusion(const Rle& pred, const Rle& gt) {
  const OverlapCounts o = rle_overlap(pred, gt);
  PixelConfusion c;
  c.tp = o.intersection;
  c.fp = o.area_a - o.intersection;
  c.fn = o.area_b - o.intersection;
  c.tn = static_cast<std::uint64_t>(pred.height) * pred.width - o.union_;
  return c;
}

double dice_loss_binary(const PixelConfusion& c) noexcept {
  const double denom = static_cast<double>((c.tp + c.fp) + (c.tp + c.fn));
  if (denom == 0.0) return 0.0;
  return 1.0 - 2.0 * static_cast<double>(c.tp) / denom;
}

double focal_loss_binary(const PixelConfusion& c, double gamma, double alpha) noexcept {
  const double n = static_cast<double>(c.tp + c.fp + c.fn + c.tn);
  if (n == 0.0) return 0.0;
  const double sum = static_cast<double>(c.tp) * focal_term(1.0, true, gamma, alpha) +
                     static_cast<double>(c.fn) * focal_term(0.0, true, gamma, alpha) +
                     static_cast<double>(c.fp) * focal_term(1.0, false, gamma, alpha) +
                     static_cast<double>(c.tn) * focal_term(0.0, false, gamma, alpha);
  return sum / n;
}

}  // namespace xami
