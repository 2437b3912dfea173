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

#ifndef XAMI_REPORT_HPP_
#define XAMI_REPORT_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xami/annot.hpp"
#include "xami/matching.hpp"
#include "xami/metrics.hpp"

namespace xami {

struct ReportOptions {
  double iou_threshold = 0.5;
  bool class_aware = true;
  bool fusion = false;
  bool losses = true;
  bool plots = true;
  std::size_t jobs = 1;
};

/// Mean focal / dice / weighted loss over matched pairs, treating the
/// predicted mask as a hard 0/1 probability map.
struct LossSummary {
  std::uint64_t pairs = 0;
  double focal = 0.0;
  double dice = 0.0;
  double combined = 0.0;
};

struct MetricsReport {
  ReportOptions options;
  std::size_t images = 0;
  std::size_t groundtruth_instances = 0;
  std::size_t predicted_instances = 0;
  ConfusionCounts counts;
  std::array<PrecisionRecall, kNumClasses> per_class{};
  PrecisionRecall overall_micro;   // pooled counts
  PrecisionRecall overall_macro;   // mean of the defined per-class values
  std::optional<IouDistribution> iou;  // absent when nothing matched
  std::array<LossSummary, kNumClasses> class_losses{};
  LossSummary overall_loss;
  std::vector<std::int64_t> image_ids;  // ground-truth image order
  std::vector<Counts> image_counts;     // aligned with image_ids
};

/// Aggregates per-image matches into the full report. `matches` must come
/// from match_dataset(groundtruth, predictions, ...) or follow the same
/// per-image list convention. Throws InvalidArgument on id mismatches.
MetricsReport build_report(const Dataset& groundtruth, const Dataset& predictions,
                           std::span<const MatchResult> matches, const ReportOptions& options = {});

/// category,precision,recall,tp,fp,fn,iou_threshold,class_aware
/// Rows: Overall (pooled), CR, SR, SL, ROS, Other, Overall (macro).
/// Undefined values are left empty.
std::string report_csv(const MetricsReport& r);
std::string report_json(const MetricsReport& r);
std::string iou_cdf_csv(const MetricsReport& r);
std::string per_image_iou_csv(const MetricsReport& r, const Dataset& groundtruth);
std::string iou_cdf_svg(const MetricsReport& r);
/// Precision / recall table for the terminal, with the matching settings.
std::string format_report_table(const MetricsReport& r);

/// Writes report.csv, report.json, iou_cdf.csv, per_image_iou.csv and,
/// when plots are enabled, iou_cdf.svg into `dir`.
void write_report_files(const MetricsReport& r, const Dataset& groundtruth, const std::filesystem::path& dir);

}  // namespace xami

#endif  // XAMI_REPORT_HPP_
