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

#ifndef XAMI_STATS_HPP_
#define XAMI_STATS_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "xami/annot.hpp"

namespace xami {

/// Image count the dataset description quotes; per-filter sums are compared
/// against it and the difference is reported as-is.
inline constexpr std::size_t kReferenceImageCount = 1000;

struct FilterRow {
  FilterBand band;
  std::size_t images = 0;
  std::size_t masks = 0;
};

struct ClassRow {
  ArtefactClass cls;
  std::size_t count = 0;
  double percent = 0.0;  // of all masks; 0 when there are none
};

struct BoxSample {
  ArtefactClass cls;
  double width;
  double height;
};

struct StatsTable {
  std::vector<FilterRow> filters;           // catalogue order
  std::size_t unknown_filter_images = 0;
  std::size_t unknown_filter_masks = 0;
  std::array<ClassRow, kNumClasses> classes{};
  std::size_t total_images = 0;
  std::size_t total_masks = 0;
  std::size_t filter_image_sum = 0;         // sum of per-filter image counts
  long long image_count_discrepancy = 0;    // filter_image_sum - kReferenceImageCount
  std::vector<BoxSample> boxes;             // annotation order
};

StatsTable dataset_stats(const Dataset& ds);

std::string filters_csv(const StatsTable& t);
std::string classes_csv(const StatsTable& t);
std::string boxes_csv(const StatsTable& t);
std::string stats_json(const StatsTable& t);
/// Human-readable summary tables.
std::string format_stats(const StatsTable& t);

}  // namespace xami

#endif  // XAMI_STATS_HPP_
