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

#ifndef XAMI_SPLIT_HPP_
#define XAMI_SPLIT_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xami/annot.hpp"

namespace xami {

struct SplitSpec {
  std::size_t k = 4;
  std::uint64_t seed = 0;
  std::map<std::int64_t, std::size_t> fold_of;  // image id -> fold

  friend bool operator==(const SplitSpec&, const SplitSpec&) = default;
};

/// Iterative stratification over per-image class multisets.
///
/// Images are never split across folds. While labelled images remain, the
/// class with the fewest unassigned instances is taken and each unassigned
/// image containing it (in seeded order) goes to the fold with the largest
/// remaining demand for that class; ties go to the fold with the most
/// remaining image capacity, then the lowest index. Images without
/// annotations are dealt round-robin in seeded order.
SplitSpec stratified_kfold(const Dataset& ds, std::size_t k, std::uint64_t seed);

struct SplitSides {
  Dataset train;
  Dataset val;
};

SplitSides materialize_split(const Dataset& ds, const SplitSpec& spec, std::size_t val_fold);

/// Annotation counts per class for each fold.
std::vector<std::array<std::size_t, kNumClasses>> fold_class_counts(const Dataset& ds,
                                                                     const SplitSpec& spec);

/// {"k": .., "seed": .., "folds": {"<image id>": fold}}
std::string split_manifest_json(const SplitSpec& spec);
SplitSpec parse_split_manifest(std::string_view json);

/// Per-fold class share table (counts and percentages).
std::string format_split_table(const Dataset& ds, const SplitSpec& spec);

}  // namespace xami

#endif  // XAMI_SPLIT_HPP_
