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

#ifndef XAMI_ANNOT_HPP_
#define XAMI_ANNOT_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xami/imgproc.hpp"
#include "xami/mask.hpp"

namespace xami {

/// Artefact taxonomy. The numeric ids are stable across runs and files.
enum class ArtefactClass : std::uint8_t { kCR = 0, kSR = 1, kSL = 2, kROS = 3, kOther = 4 };

inline constexpr std::size_t kNumClasses = 5;
inline constexpr std::array<ArtefactClass, kNumClasses> kAllClasses = {
    ArtefactClass::kCR, ArtefactClass::kSR, ArtefactClass::kSL, ArtefactClass::kROS,
    ArtefactClass::kOther};

constexpr std::size_t class_index(ArtefactClass c) noexcept { return static_cast<std::size_t>(c); }

/// Short label: "CR", "SR", "SL", "ROS", "Other".
std::string_view class_name(ArtefactClass c) noexcept;
std::string_view class_description(ArtefactClass c) noexcept;
/// Case-insensitive; accepts short labels, descriptions ("star loop"), and
/// hyphen/underscore variants ("read-out-streak").
std::optional<ArtefactClass> parse_class(std::string_view text);

struct ImageRecord {
  std::int64_t id = 0;
  std::string file_name;
  std::size_t width = 0;
  std::size_t height = 0;
  std::optional<FilterName> filter;

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

/// Filter code embedded in an OM file name such as "S0148740701_U.png" or
/// "S0148740701_L_x.jpg". Returns nullopt when no token matches a filter.
std::optional<FilterName> filter_from_file_name(std::string_view file_name);

struct Annotation {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  ArtefactClass cls = ArtefactClass::kCR;
  InstanceMask mask;
  BBox bbox;
  double area = 0.0;
  std::optional<double> score;  // predictions only

  bool is_prediction() const noexcept { return score.has_value(); }
  friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// Images plus their annotations. Category ids on disk are remapped to
/// ArtefactClass, so the category table is implicit.
class Dataset {
 public:
  Dataset() = default;
  /// Validates unique ids and that every annotation refers to an image.
  Dataset(std::vector<ImageRecord> images, std::vector<Annotation> annotations);

  const std::vector<ImageRecord>& images() const noexcept { return images_; }
  const std::vector<Annotation>& annotations() const noexcept { return annotations_; }

  const ImageRecord* find_image(std::int64_t id) const;

  /// On-disk category id -> class, as read from the source file. Defaults
  /// to the canonical ids 0..4. Not part of equality.
  const std::unordered_map<std::int64_t, ArtefactClass>& source_categories() const noexcept {
    return source_categories_;
  }
  void set_source_categories(std::unordered_map<std::int64_t, ArtefactClass> map) {
    source_categories_ = std::move(map);
  }
  /// Indices into annotations(), per image id, in file order.
  const std::vector<std::size_t>& annotations_of(std::int64_t image_id) const;

  /// Images (and their annotations) whose id satisfies `keep`.
  template <typename Pred>
  Dataset filter_images(Pred keep) const {
    std::vector<ImageRecord> imgs;
    std::vector<Annotation> anns;
    for (const auto& img : images_)
      if (keep(img.id)) imgs.push_back(img);
    for (const auto& a : annotations_)
      if (keep(a.image_id)) anns.push_back(a);
    Dataset out(std::move(imgs), std::move(anns));
    out.source_categories_ = source_categories_;
    return out;
  }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.images_ == b.images_ && a.annotations_ == b.annotations_;
  }

 private:
  void index();

  std::vector<ImageRecord> images_;
  std::vector<Annotation> annotations_;
  std::unordered_map<std::int64_t, std::size_t> image_pos_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> by_image_;
  std::unordered_map<std::int64_t, ArtefactClass> source_categories_ = {
      {0, ArtefactClass::kCR}, {1, ArtefactClass::kSR}, {2, ArtefactClass::kSL},
      {3, ArtefactClass::kROS}, {4, ArtefactClass::kOther}};
};

}  // namespace xami

#endif  // XAMI_ANNOT_HPP_
