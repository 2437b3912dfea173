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

#ifndef XAMI_COCO_HPP_
#define XAMI_COCO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "xami/annot.hpp"

namespace xami {

enum class CocoKind { kGroundTruth, kPredictions };

/// COCO-style ground truth: top-level "images", "annotations", "categories".
/// Segmentations may be polygon lists or uncompressed RLE objects; an
/// annotation without segmentation uses its bbox as a rectangle.
Dataset parse_coco_groundtruth(std::string_view json);

/// Results file: a JSON array of {image_id, category_id, segmentation?,
/// bbox?, score?} (or an object with an "annotations" array). Image ids and
/// category ids are resolved against `groundtruth`; the returned Dataset
/// shares its images and holds the predictions as annotations.
Dataset parse_coco_predictions(std::string_view json, const Dataset& groundtruth);

/// Dispatches on `kind`; predictions require `groundtruth`.
Dataset parse_coco(std::string_view json, CocoKind kind, const Dataset* groundtruth = nullptr);

/// Writes canonical category ids 0..4. Polygons stay polygons; RLE and
/// bitmap masks are written as uncompressed RLE objects.
std::string serialize_coco(const Dataset& ds);
/// Results array for the annotations of `ds` (scores included when present).
std::string serialize_predictions(const Dataset& ds);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace xami

#endif  // XAMI_COCO_HPP_
