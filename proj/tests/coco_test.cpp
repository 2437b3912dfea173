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

#include "xami/coco.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "json.hpp"
#include "support/synthetic.hpp"
#include "xami/error.hpp"
#include "xami/stats.hpp"

namespace xami {
namespace {

using nlohmann::json;

json one_image_doc() {
  return json::parse(R"({
    "images": [{"id": 7, "file_name": "S0148740701_U.png", "width": 4, "height": 4}],
    "categories": [{"id": 1, "name": "Central Ring"}, {"id": 2, "name": "Smoke Ring"},
                   {"id": 3, "name": "Star Loop"}, {"id": 4, "name": "Read-out Streak"},
                   {"id": 5, "name": "Other"}],
    "annotations": [{"id": 11, "image_id": 7, "category_id": 4,
                     "segmentation": [[0, 0, 2, 0, 2, 2, 0, 2]]}]
  })");
}

CocoErrorKind kind_of(const std::string& text, const Dataset* gt = nullptr) {
  try {
    if (gt)
      parse_coco_predictions(text, *gt);
    else
      parse_coco_groundtruth(text);
  } catch (const CocoError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no CocoError for " << text;
  return CocoErrorKind::kMalformed;
}

TEST(Classes, FixedOrderAndNames) {
  EXPECT_EQ(class_index(ArtefactClass::kCR), 0u);
  EXPECT_EQ(class_index(ArtefactClass::kOther), 4u);
  for (ArtefactClass c : kAllClasses) {
    EXPECT_EQ(parse_class(class_name(c)), c);
    EXPECT_EQ(parse_class(class_description(c)), c);
  }
  EXPECT_EQ(parse_class("read-out streaks"), ArtefactClass::kROS);
  EXPECT_EQ(parse_class("SMOKE_RING"), ArtefactClass::kSR);
  EXPECT_FALSE(parse_class("satellite trail").has_value());
}

TEST(FilterFromFileName, Tokens) {
  EXPECT_EQ(filter_from_file_name("S0148740701_U.png"), FilterName::kU);
  EXPECT_EQ(filter_from_file_name("dir/S0148740701_L_rebinned.png"), FilterName::kUVW1);
  EXPECT_EQ(filter_from_file_name("S0148740701_UVM2.fits"), FilterName::kUVM2);
  EXPECT_FALSE(filter_from_file_name("frame.png").has_value());
}

TEST(ParseCoco, OneImageOnePolygon) {
  const Dataset ds = parse_coco_groundtruth(one_image_doc().dump());
  ASSERT_EQ(ds.images().size(), 1u);
  ASSERT_EQ(ds.annotations().size(), 1u);
  EXPECT_EQ(ds.source_categories().size(), 5u);
  const Annotation& a = ds.annotations()[0];
  EXPECT_EQ(a.cls, ArtefactClass::kROS);
  EXPECT_EQ(a.area, 4.0);
  EXPECT_EQ(a.bbox, (BBox{0, 0, 2, 2}));
  EXPECT_FALSE(a.score.has_value());
  EXPECT_EQ(ds.images()[0].filter, FilterName::kU);
}

TEST(ParseCoco, RleSegmentation) {
  json doc = one_image_doc();
  doc["annotations"][0]["segmentation"] = json{{"size", {4, 4}}, {"counts", {5, 2, 9}}};
  const Dataset ds = parse_coco_groundtruth(doc.dump());
  EXPECT_EQ(ds.annotations()[0].area, 2.0);
  EXPECT_TRUE(ds.annotations()[0].mask.is_rle());

  doc["annotations"][0]["segmentation"] = json{{"size", {4, 4}}, {"counts", {5, 2, 8}}};
  EXPECT_EQ(kind_of(doc.dump()), CocoErrorKind::kCountsSumMismatch);
  doc["annotations"][0]["segmentation"] = json{{"size", {4, 4}}, {"counts", "PPYo0"}};
  EXPECT_EQ(kind_of(doc.dump()), CocoErrorKind::kUnsupportedSegmentation);
}

TEST(ParseCoco, Errors) {
  json doc = one_image_doc();
  doc["annotations"][0]["image_id"] = 8;
  EXPECT_EQ(kind_of(doc.dump()), CocoErrorKind::kDanglingImageId);

  doc = one_image_doc();
  doc["annotations"][0]["category_id"] = 99;
  EXPECT_EQ(kind_of(doc.dump()), CocoErrorKind::kUnknownCategory);

  doc = one_image_doc();
  doc["categories"].push_back({{"id", 6}, {"name", "satellite"}});
  EXPECT_NO_THROW(parse_coco_groundtruth(doc.dump()));  // unused unknown category
  doc["annotations"][0]["category_id"] = 6;
  EXPECT_EQ(kind_of(doc.dump()), CocoErrorKind::kUnknownCategory);

  doc = one_image_doc();
  doc["annotations"].push_back(doc["annotations"][0]);
  EXPECT_EQ(kind_of(doc.dump()), CocoErrorKind::kDuplicateId);

  doc = one_image_doc();
  doc["images"].push_back(doc["images"][0]);
  EXPECT_EQ(kind_of(doc.dump()), CocoErrorKind::kDuplicateId);

  EXPECT_EQ(kind_of("{not json"), CocoErrorKind::kMalformed);
  EXPECT_EQ(kind_of("[]"), CocoErrorKind::kMalformed);
}

TEST(ParsePredictions, ArrayWithScoresAndBoxes) {
  const Dataset gt = parse_coco_groundtruth(one_image_doc().dump());
  const json preds = json::parse(R"([
    {"image_id": 7, "category_id": 4, "segmentation": [[0, 0, 2, 0, 2, 2, 0, 2]], "score": 0.9},
    {"image_id": 7, "category_id": 3, "bbox": [1, 1, 2, 2], "score": 0.4},
    {"image_id": 7, "category_name": "SR", "bbox": [0, 0, 1, 1]}
  ])");
  const Dataset ds = parse_coco_predictions(preds.dump(), gt);
  ASSERT_EQ(ds.annotations().size(), 3u);
  EXPECT_EQ(ds.annotations()[0].id, 1);
  EXPECT_EQ(ds.annotations()[1].cls, ArtefactClass::kSL);
  EXPECT_EQ(ds.annotations()[1].mask.area(), 4u);
  EXPECT_EQ(*ds.annotations()[1].score, 0.4);
  EXPECT_EQ(*ds.annotations()[2].score, 1.0);
  EXPECT_EQ(ds.annotations()[2].cls, ArtefactClass::kSR);

  EXPECT_EQ(kind_of(R"([{"image_id": 8, "category_id": 4, "bbox": [0,0,1,1]}])", &gt),
            CocoErrorKind::kDanglingImageId);
  EXPECT_EQ(kind_of(R"([{"image_id": 7, "category_id": 0, "bbox": [0,0,1,1]}])", &gt),
            CocoErrorKind::kUnknownCategory);
  EXPECT_EQ(kind_of(R"([{"image_id": 7, "category_id": 4, "bbox": [0,0,1,1], "score": 1.5}])", &gt),
            CocoErrorKind::kMalformed);
  EXPECT_EQ(kind_of(R"([{"image_id": 7, "category_id": 4}])", &gt), CocoErrorKind::kMalformed);
  EXPECT_EQ(parse_coco_predictions(R"({"annotations": []})", gt).annotations().size(), 0u);
}

TEST(SerializeCoco, CanonicalCategoriesAndRoundTrip) {
  const Dataset gt = parse_coco_groundtruth(one_image_doc().dump());
  const std::string text = serialize_coco(gt);
  const json doc = json::parse(text);
  ASSERT_EQ(doc["categories"].size(), 5u);
  EXPECT_EQ(doc["categories"][3]["name"], "ROS");
  EXPECT_EQ(doc["annotations"][0]["category_id"], 3);
  const Dataset again = parse_coco_groundtruth(text);
  EXPECT_EQ(again, gt);
  EXPECT_EQ(serialize_coco(again), text);
}

TEST(SerializeCoco, SyntheticDatasetRoundTrip) {
  const Dataset ds = testing::published_surrogate(5).filter_images([](std::int64_t id) { return id % 9 == 0; });
  const std::string text = serialize_coco(ds);
  const Dataset back = parse_coco_groundtruth(text);
  EXPECT_EQ(back, ds);
  EXPECT_EQ(serialize_coco(back), text);

  const Dataset preds = testing::noisy_predictions(ds, 3);
  const Dataset preds_back = parse_coco_predictions(serialize_predictions(preds), ds);
  EXPECT_EQ(preds_back, preds);
}

TEST(Dataset, ValidatesLinks) {
  ImageRecord img{1, "a.png", 4, 4, std::nullopt};
  Annotation a;
  a.id = 1;
  a.image_id = 2;
  a.mask = InstanceMask::from_box({0, 0, 1, 1}, 4, 4);
  EXPECT_THROW(Dataset({img}, {a}), CocoError);
  a.image_id = 1;
  EXPECT_THROW(Dataset({img}, {a, a}), CocoError);
  EXPECT_THROW(Dataset({img, img}, {}), CocoError);
  const Dataset ok({img}, {a});
  EXPECT_EQ(ok.annotations_of(1).size(), 1u);
  EXPECT_TRUE(ok.annotations_of(5).empty());
  EXPECT_EQ(ok.find_image(3), nullptr);
}

TEST(DatasetStats, EmptyDataset) {
  const StatsTable t = dataset_stats(Dataset{});
  EXPECT_EQ(t.total_images, 0u);
  EXPECT_EQ(t.total_masks, 0u);
  for (const auto& row : t.filters) {
    EXPECT_EQ(row.images, 0u);
    EXPECT_EQ(row.masks, 0u);
  }
  for (const auto& row : t.classes) EXPECT_EQ(row.percent, 0.0);
  EXPECT_TRUE(t.boxes.empty());
  EXPECT_FALSE(stats_json(t).empty());
}

TEST(DatasetStats, CountsAndPercentages) {
  const Dataset ds = testing::published_surrogate(8);
  const StatsTable t = dataset_stats(ds);
  EXPECT_EQ(t.total_masks, testing::kPublishedMaskTotal);
  EXPECT_EQ(t.filter_image_sum, 1055u);
  EXPECT_EQ(t.image_count_discrepancy, 55);
  double pct = 0;
  for (const auto& row : t.classes) {
    EXPECT_NEAR(row.percent, 100.0 * row.count / t.total_masks, 0.01);
    pct += row.percent;
  }
  EXPECT_NEAR(pct, 100.0, 1e-9);
  EXPECT_EQ(t.boxes.size(), t.total_masks);
  const std::string csv = classes_csv(t);
  EXPECT_NE(csv.find("ROS"), std::string::npos);
}

}  // namespace
}  // namespace xami
