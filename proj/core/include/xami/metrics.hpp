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

#ifndef XAMI_METRICS_HPP_
#define XAMI_METRICS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "xami/annot.hpp"
#include "xami/imgproc.hpp"
#include "xami/mask.hpp"
#include "xami/matching.hpp"

namespace xami {

struct Counts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  Counts& operator+=(const Counts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const Counts&, const Counts&) = default;
};

/// Per-class counts; the overall row is always the sum of the classes.
class ConfusionCounts {
 public:
  Counts& operator[](ArtefactClass c) noexcept { return per_class_[class_index(c)]; }
  const Counts& operator[](ArtefactClass c) const noexcept { return per_class_[class_index(c)]; }
  Counts overall() const noexcept;

  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept;
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;

 private:
  std::array<Counts, kNumClasses> per_class_{};
};

/// TP is booked under the ground-truth class, FP under the predicted class
/// and FN under the ground-truth class.
ConfusionCounts count_matches(const MatchResult& m, std::span<const Annotation> preds,
                              std::span<const Annotation> gts);

struct PrecisionRecall {
  std::optional<double> precision;  // percent; nullopt when TP + FP == 0
  std::optional<double> recall;     // percent; nullopt when TP + FN == 0
};

PrecisionRecall precision_recall(const Counts& c) noexcept;

struct IouDistribution {
  std::vector<double> samples;            // sorted pair IoUs
  std::vector<double> cumulative;         // (i + 1) / n, ends at exactly 1
  std::vector<std::int64_t> image_ids;    // images with at least one instance
  std::vector<double> per_image_means;    // aligned with image_ids
  double mean = 0.0;                      // over per-image means
  double std = 0.0;                       // population std over per-image means
};

/// Per-image mean = sum of pair IoUs / (pairs + FP + FN); images with no
/// instances at all are skipped. Throws InvalidArgument when no image has a
/// matched pair.
IouDistribution iou_distribution(std::span<const MatchResult> matches);

inline constexpr double kFocalGamma = 2.0;
inline constexpr double kFocalAlpha = 0.25;
inline constexpr double kProbabilityEpsilon = 1e-7;
inline constexpr double kFocalWeight = 20.0;
inline constexpr double kDiceWeight = 1.0;

/// 1 - 2·Σ(p·g) / (Σp + Σg); zero when both are empty.
double dice_loss(const PixelGrid& prob, const Bitmap& gt);

/// Mean over pixels of -α_t (1 - p_t)^γ log(p_t), p clamped to [ε, 1 - ε].
double focal_loss(const PixelGrid& prob, const Bitmap& gt, double gamma = kFocalGamma,
                  double alpha = kFocalAlpha);

/// 20 · focal + 1 · dice.
double weighted_loss(double focal, double dice) noexcept;
double combined_loss(const PixelGrid& prob, const Bitmap& gt);

/// Pixel tallies of a binary prediction against a binary target.
struct PixelConfusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
};

PixelConfusion pixel_confusion(const Rle& pred, const Rle& gt);
/// Closed forms of dice_loss / focal_loss for a hard 0/1 prediction map.
double dice_loss_binary(const PixelConfusion& c) noexcept;
double focal_loss_binary(const PixelConfusion& c, double gamma = kFocalGamma,
                         double alpha = kFocalAlpha) noexcept;

}  // namespace xami

#endif  // XAMI_METRICS_HPP_
