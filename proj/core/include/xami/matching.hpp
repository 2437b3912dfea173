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

#ifndef XAMI_MATCHING_HPP_
#define XAMI_MATCHING_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xami/annot.hpp"
#include "xami/hungarian.hpp"
#include "xami/imgproc.hpp"
#include "xami/mask.hpp"

namespace xami {

/// |a ∩ b| / |a ∪ b|. Masks must share a canvas; throws when both are empty.
double iou(const InstanceMask& a, const InstanceMask& b);
double iou(const Rle& a, const Rle& b);

/// rows = predictions, cols = ground truths.
CostMatrix iou_matrix(std::span<const Rle> preds, std::span<const Rle> gts);

struct MatchedPair {
  std::size_t pred;  // index into the image's prediction list
  std::size_t gt;    // index into the image's ground-truth list
  double iou;
  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

struct MatchResult {
  std::int64_t image_id = 0;
  std::vector<MatchedPair> pairs;
  std::vector<std::size_t> false_positives;
  std::vector<std::size_t> false_negatives;
  double iou_threshold = 0.5;
  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

struct MatchOptions {
  double iou_threshold = 0.5;
  bool class_aware = true;
};

/// One-shot optimal assignment on the 1 - IoU cost matrix (cross-class cost
/// 1.0 in class-aware mode). Assigned pairs below the threshold, or of
/// different classes in class-aware mode, are split into one FP and one FN.
MatchResult match_instances(std::span<const Annotation> preds, std::span<const Annotation> gts,
                            const MatchOptions& options = {});

/// Same, with masks already encoded. `pred_rles[i]` belongs to `preds[i]`.
MatchResult match_instances(std::span<const Annotation> preds, std::span<const Rle> pred_rles,
                            std::span<const Annotation> gts, std::span<const Rle> gt_rles,
                            const MatchOptions& options);

/// Matches every ground-truth image against the predictions on it, in
/// ground-truth image order. Per-image lists follow Dataset::annotations_of.
std::vector<MatchResult> match_dataset(const Dataset& groundtruth, const Dataset& predictions,
                                       const MatchOptions& options = {}, std::size_t jobs = 1);

struct BackgroundStats {
  double median = 0.0;
  double sigma = 0.0;
  double k_clip = 3.0;
  std::size_t iterations = 5;
};

/// Iterative sigma clipping: median and population standard deviation of
/// the surviving pixels, rejecting those outside median ± k_clip·sigma, for
/// `iterations` rounds or until nothing is rejected.
BackgroundStats background_stats(const PixelGrid& grid, double k_clip = 3.0, std::size_t iterations = 5);

/// Threshold multiplier on sigma for the faint-object test.
inline constexpr double kFaintSigma = 1.0;

/// Mean intensity under the mask <= median + 1 sigma (inclusive).
bool is_faint(const InstanceMask& mask, const PixelGrid& grid, const BackgroundStats& bg);

/// Classes whose faint instances take the detector mask.
bool fusion_applies_to(ArtefactClass cls) noexcept;

/// Returns the detector mask for faint SL / Other instances, otherwise the
/// segmenter mask. Never blends the two.
const InstanceMask& fuse_masks(const InstanceMask& detector_mask, const InstanceMask& segmenter_mask,
                               ArtefactClass cls, const PixelGrid& grid, const BackgroundStats& bg);

/// Replaces a prediction's mask by fuse_masks(bbox rectangle, mask, ...).
/// Predictions that carry no segmentation of their own are returned as-is.
Annotation fuse_prediction(const Annotation& pred, const PixelGrid& grid, const BackgroundStats& bg);

/// One JSON object per image, carrying both annotation ids and per-image
/// list indices:
/// {"image_id":..,"iou_threshold":..,
///  "pairs":[{"pred_id":..,"gt_id":..,"pred_index":..,"gt_index":..,"iou":..}],
///  "false_positives":[{"pred_id":..,"pred_index":..}],
///  "false_negatives":[{"gt_id":..,"gt_index":..}]}
std::string match_record_json(const MatchResult& m, std::span<const Annotation> preds,
                              std::span<const Annotation> gts);

/// Parses one match_record_json line back into index form.
MatchResult parse_match_record(std::string_view line);

}  // namespace xami

#endif  // XAMI_MATCHING_HPP_
