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

#include "xami/annot.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "xami/error.hpp"

namespace xami {
namespace {

std::string normalize(std::string_view s) {
  std::string out;
  for (char ch : s) {
    if (ch == '-' || ch == '_' || ch == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return out;
}

}  // namespace

std::string_view class_name(ArtefactClass c) noexcept {
  switch (c) {
    case ArtefactClass::kCR: return "CR";
    case ArtefactClass::kSR: return "SR";
    case ArtefactClass::kSL: return "SL";
    case ArtefactClass::kROS: return "ROS";
    case ArtefactClass::kOther: return "Other";
  }
  return "?";
}

std::string_view class_description(ArtefactClass c) noexcept {
  switch (c) {
    case ArtefactClass::kCR: return "central ring";
    case ArtefactClass::kSR: return "smoke ring";
    case ArtefactClass::kSL: return "star loop";
    case ArtefactClass::kROS: return "read-out streak";
    case ArtefactClass::kOther: return "other";
  }
  return "?";
}

std::optional<ArtefactClass> parse_class(std::string_view text) {
  const std::string key = normalize(text);
  for (ArtefactClass c : kAllClasses) {
    if (key == normalize(class_name(c)) || key == normalize(class_description(c)) ||
        key == normalize(class_description(c)) + "s")
      return c;
  }
  if (key == "readoutstreaks" || key == "readoutstreak" || key == "ros") return ArtefactClass::kROS;
  return std::nullopt;
}

std::optional<FilterName> filter_from_file_name(std::string_view file_name) {
  std::string_view stem = file_name;
  if (auto slash = stem.find_last_of("/\\"); slash != std::string_view::npos)
    stem = stem.substr(slash + 1);
  if (auto dot = stem.find('.'); dot != std::string_view::npos) stem = stem.substr(0, dot);
  // Tokens after the observation id, e.g. "S0148740701_U" or "S0148740701_UVW1_rebinned".
  std::size_t start = stem.find('_');
  while (start != std::string_view::npos) {
    const std::size_t end = stem.find('_', start + 1);
    const auto token = stem.substr(start + 1, end == std::string_view::npos ? end : end - start - 1);
    if (auto band = parse_filter_band(token)) return band->name;
    start = end;
  }
  return std::nullopt;
}

Dataset::Dataset(std::vector<ImageRecord> images, std::vector<Annotation> annotations)
    : images_(std::move(images)), annotations_(std::move(annotations)) {
  index();
}

void Dataset::index() {
  image_pos_.clear();
  by_image_.clear();
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (!image_pos_.emplace(images_[i].id, i).second)
      throw CocoError(CocoErrorKind::kDuplicateId,
                      "duplicate image id " + std::to_string(images_[i].id));
  }
  std::unordered_set<std::int64_t> ann_ids;
  for (std::size_t i = 0; i < annotations_.size(); ++i) {
    const auto& a = annotations_[i];
    if (!ann_ids.insert(a.id).second)
      throw CocoError(CocoErrorKind::kDuplicateId, "duplicate annotation id " + std::to_string(a.id));
    if (!image_pos_.contains(a.image_id))
      throw CocoError(CocoErrorKind::kDanglingImageId,
                      "annotation " + std::to_string(a.id) + " refers to unknown image_id " +
                          std::to_string(a.image_id));
    by_image_[a.image_id].push_back(i);
  }
}

const ImageRecord* Dataset::find_image(std::int64_t id) const {
  auto it = image_pos_.find(id);
  return it == image_pos_.end() ? nullptr : &images_[it->second];
}

const std::vector<std::size_t>& Dataset::annotations_of(std::int64_t image_id) const {
  static const std::vector<std::size_t> kNone;
  auto it = by_image_.find(image_id);
  return it == by_image_.end() ? kNone : it->second;
}

}  // namespace xami
