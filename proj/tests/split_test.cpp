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

#include "xami/split.hpp"

#include <gtest/gtest.h>

#include <set>

#include "support/synthetic.hpp"
#include "xami/error.hpp"

namespace xami {
namespace {

Dataset images_with(const std::vector<std::vector<ArtefactClass>>& labels) {
  std::vector<ImageRecord> imgs;
  std::vector<Annotation> anns;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    imgs.push_back({static_cast<std::int64_t>(i + 1), "img_" + std::to_string(i) + ".png", 8, 8, std::nullopt});
    for (ArtefactClass c : labels[i]) {
      Annotation a;
      a.id = static_cast<std::int64_t>(anns.size() + 1);
      a.image_id = imgs.back().id;
      a.cls = c;
      a.mask = InstanceMask::from_box({0, 0, 2, 2}, 8, 8);
      a.bbox = {0, 0, 2, 2};
      a.area = 4;
      anns.push_back(std::move(a));
    }
  }
  return Dataset(std::move(imgs), std::move(anns));
}

TEST(StratifiedKFold, UniformCase) {
  const Dataset ds = images_with(std::vector<std::vector<ArtefactClass>>(8, {ArtefactClass::kROS}));
  const SplitSpec spec = stratified_kfold(ds, 4, 1);
  std::vector<int> per_fold(4, 0);
  for (const auto& [id, f] : spec.fold_of) ++per_fold[f];
  for (int n : per_fold) EXPECT_EQ(n, 2);
}

TEST(StratifiedKFold, Errors) {
  const Dataset ds = images_with({{ArtefactClass::kCR}, {ArtefactClass::kSR}});
  EXPECT_THROW(stratified_kfold(ds, 1, 0), InvalidArgument);
  EXPECT_THROW(stratified_kfold(ds, 3, 0), InvalidArgument);
  EXPECT_NO_THROW(stratified_kfold(ds, 2, 0));
}

TEST(StratifiedKFold, UnlabelledImagesDealtRoundRobin) {
  const Dataset ds = images_with(std::vector<std::vector<ArtefactClass>>(9));
  const SplitSpec spec = stratified_kfold(ds, 3, 4);
  std::vector<int> per_fold(3, 0);
  for (const auto& [id, f] : spec.fold_of) ++per_fold[f];
  EXPECT_EQ(per_fold, (std::vector<int>{3, 3, 3}));
}

TEST(StratifiedKFold, PartitionAndDeterminism) {
  const Dataset ds = testing::published_surrogate(12);
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    const SplitSpec a = stratified_kfold(ds, 4, seed);
    EXPECT_EQ(a, stratified_kfold(ds, 4, seed));
    ASSERT_EQ(a.fold_of.size(), ds.images().size());
    const auto counts = fold_class_counts(ds, a);
    std::array<std::size_t, kNumClasses> sum{};
    for (const auto& fold : counts)
      for (std::size_t c = 0; c < kNumClasses; ++c) sum[c] += fold[c];
    EXPECT_EQ(sum, testing::kPublishedClassTotals);
  }
  EXPECT_NE(stratified_kfold(ds, 4, 1).fold_of, stratified_kfold(ds, 4, 2).fold_of);
}

TEST(StratifiedKFold, FoldSharesTrackGlobalShares) {
  const Dataset ds = testing::published_surrogate(13);
  const SplitSpec spec = stratified_kfold(ds, 4, 7);
  for (const auto& fold : fold_class_counts(ds, spec)) {
    std::size_t n = 0;
    for (auto v : fold) n += v;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const double share = 100.0 * fold[c] / n;
      const double global = 100.0 * testing::kPublishedClassTotals[c] / testing::kPublishedMaskTotal;
      EXPECT_LE(std::abs(share - global), 3.0) << class_name(kAllClasses[c]);
    }
  }
}

TEST(MaterializeSplit, DisjointCover) {
  const Dataset two = images_with({{ArtefactClass::kCR}, {ArtefactClass::kCR}});
  const SplitSides s2 = materialize_split(two, stratified_kfold(two, 2, 0), 1);
  EXPECT_EQ(s2.train.images().size(), 1u);
  EXPECT_EQ(s2.val.images().size(), 1u);

  const Dataset ds = testing::published_surrogate(14);
  const SplitSpec spec = stratified_kfold(ds, 4, 3);
  const SplitSides sides = materialize_split(ds, spec, 2);
  std::set<std::int64_t> train, val;
  for (const auto& i : sides.train.images()) train.insert(i.id);
  for (const auto& i : sides.val.images()) val.insert(i.id);
  for (auto id : val) EXPECT_FALSE(train.contains(id));
  EXPECT_EQ(train.size() + val.size(), ds.images().size());
  EXPECT_EQ(sides.train.annotations().size() + sides.val.annotations().size(), ds.annotations().size());
  for (const auto& a : sides.val.annotations()) EXPECT_TRUE(val.contains(a.image_id));
  EXPECT_THROW(materialize_split(ds, spec, 4), InvalidArgument);
}

TEST(SplitManifest, RoundTrip) {
  const Dataset ds = images_with({{ArtefactClass::kCR}, {ArtefactClass::kSL}, {}, {ArtefactClass::kOther}});
  const SplitSpec spec = stratified_kfold(ds, 2, 42);
  EXPECT_EQ(parse_split_manifest(split_manifest_json(spec)), spec);
  EXPECT_THROW(parse_split_manifest("{\"k\": 2}"), Error);
  EXPECT_FALSE(format_split_table(ds, spec).empty());
}

}  // namespace
}  // namespace xami
