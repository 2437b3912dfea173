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

#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "xami/error.hpp"

namespace xami {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& msg) {
  throw CocoError(CocoErrorKind::kMalformed, "COCO: " + msg);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) malformed(where + " lacks \"" + key + "\"");
  return *it;
}

std::int64_t int_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer()) malformed(where + ": \"" + key + "\" is not an integer");
  return v.get<std::int64_t>();
}

std::size_t dim_field(const json& obj, const char* key, const std::string& where) {
  const auto v = int_field(obj, key, where);
  if (v < 0) malformed(where + ": \"" + key + "\" is negative");
  return static_cast<std::size_t>(v);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) malformed(where + ": expected a number");
  return v.get<double>();
}

std::optional<BBox> parse_bbox(const json& obj, const std::string& where) {
  auto it = obj.find("bbox");
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_array() || it->size() != 4) malformed(where + ": bbox must be [x, y, w, h]");
  return BBox{number((*it)[0], where), number((*it)[1], where), number((*it)[2], where),
              number((*it)[3], where)};
}

std::optional<InstanceMask> parse_segmentation(const json& obj, const ImageRecord& img,
                                               const std::string& where) {
  auto it = obj.find("segmentation");
  if (it == obj.end() || it->is_null()) return std::nullopt;
  const json& seg = *it;
  try {
    if (seg.is_array()) {
      if (seg.empty()) return std::nullopt;
      Polygon poly;
      for (const auto& ring_json : seg) {
        if (!ring_json.is_array() || ring_json.size() % 2 != 0)
          malformed(where + ": polygon ring must be a flat [x1, y1, x2, y2, ...] list");
        std::vector<Point> ring;
        ring.reserve(ring_json.size() / 2);
        for (std::size_t i = 0; i < ring_json.size(); i += 2)
          ring.push_back({number(ring_json[i], where), number(ring_json[i + 1], where)});
        poly.rings.push_back(std::move(ring));
      }
      return InstanceMask::from_polygon(std::move(poly), img.height, img.width);
    }
    if (seg.is_object()) {
      const json& size = field(seg, "size", where + " segmentation");
      const json& counts = field(seg, "counts", where + " segmentation");
      if (counts.is_string())
        throw CocoError(CocoErrorKind::kUnsupportedSegmentation,
                        "COCO: " + where + ": compressed RLE strings are not supported");
      if (!size.is_array() || size.size() != 2 || !counts.is_array())
        malformed(where + ": RLE must be {\"size\": [h, w], \"counts\": [...]}");
      Rle rle;
      rle.height = size[0].get<std::size_t>();
      rle.width = size[1].get<std::size_t>();
      rle.counts.reserve(counts.size());
      for (const auto& c : counts) {
        if (!c.is_number_integer() || c.get<std::int64_t>() < 0)
          malformed(where + ": RLE counts must be non-negative integers");
        rle.counts.push_back(c.get<std::uint32_t>());
      }
      std::uint64_t sum = 0;
      for (auto c : rle.counts) sum += c;
      if (sum != static_cast<std::uint64_t>(rle.height) * rle.width)
        throw CocoError(CocoErrorKind::kCountsSumMismatch,
                        "COCO: " + where + ": RLE counts sum to " + std::to_string(sum) +
                            ", expected " + std::to_string(rle.height * rle.width));
      if (rle.height != img.height || rle.width != img.width)
        malformed(where + ": RLE size does not match image " + std::to_string(img.id));
      return InstanceMask::from_rle(std::move(rle));
    }
  } catch (const InvalidArgument& e) {
    malformed(where + ": " + e.what());
  } catch (const json::exception& e) {
    malformed(where + ": " + e.what());
  }
  malformed(where + ": unsupported segmentation value");
}

std::optional<FilterName> image_filter(const json& obj, const std::string& file_name,
                                       const std::string& where) {
  if (auto it = obj.find("filter"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) malformed(where + ": filter must be a string");
    auto band = parse_filter_band(it->get<std::string>());
    if (!band) malformed(where + ": unknown filter \"" + it->get<std::string>() + "\"");
    return band->name;
  }
  return filter_from_file_name(file_name);
}

Annotation build_annotation(const json& obj, std::int64_t id, const ImageRecord& img,
                            ArtefactClass cls, std::optional<double> score,
                            const std::string& where) {
  Annotation a;
  a.id = id;
  a.image_id = img.id;
  a.cls = cls;
  a.score = score;
  auto box = parse_bbox(obj, where);
  auto mask = parse_segmentation(obj, img, where);
  if (mask) {
    a.mask = std::move(*mask);
  } else if (box) {
    try {
      a.mask = InstanceMask::from_box(*box, img.height, img.width);
    } catch (const InvalidArgument& e) {
      malformed(where + ": " + e.what());
    }
  } else {
    malformed(where + " has neither segmentation nor bbox");
  }
  const auto area = a.mask.area();
  if (box) {
    a.bbox = *box;
  } else if (area > 0) {
    a.bbox = bbox_of(a.mask);
  }
  if (auto it = obj.find("area"); it != obj.end() && it->is_number()) {
    a.area = it->get<double>();
  } else {
    a.area = static_cast<double>(area);
  }
  return a;
}

ArtefactClass resolve_category(const json& obj, const Dataset& ref, const std::string& where) {
  if (auto it = obj.find("category_id"); it != obj.end()) {
    if (!it->is_number_integer()) malformed(where + ": category_id is not an integer");
    const auto id = it->get<std::int64_t>();
    auto found = ref.source_categories().find(id);
    if (found == ref.source_categories().end())
      throw CocoError(CocoErrorKind::kUnknownCategory,
                      "COCO: " + where + ": unknown category_id " + std::to_string(id));
    return found->second;
  }
  if (auto it = obj.find("category_name"); it != obj.end() && it->is_string()) {
    if (auto c = parse_class(it->get<std::string>())) return *c;
    throw CocoError(CocoErrorKind::kUnknownCategory,
                    "COCO: " + where + ": unknown category \"" + it->get<std::string>() + "\"");
  }
  malformed(where + " lacks category_id");
}

json mask_to_json(const InstanceMask& mask) {
  if (const auto* poly = std::get_if<Polygon>(&mask.encoding())) {
    json rings = json::array();
    for (const auto& ring : poly->rings) {
      json flat = json::array();
      for (const auto& p : ring) {
        flat.push_back(p.x);
        flat.push_back(p.y);
      }
      rings.push_back(std::move(flat));
    }
    return rings;
  }
  const Rle rle = mask.to_rle();
  return json{{"size", {rle.height, rle.width}}, {"counts", rle.counts}};
}

json annotation_to_json(const Annotation& a, bool with_id) {
  json j;
  if (with_id) j["id"] = a.id;
  j["image_id"] = a.image_id;
  j["category_id"] = class_index(a.cls);
  j["segmentation"] = mask_to_json(a.mask);
  j["bbox"] = {a.bbox.x, a.bbox.y, a.bbox.w, a.bbox.h};
  j["area"] = a.area;
  if (a.score) j["score"] = *a.score;
  j["iscrowd"] = 0;
  return j;
}

}  // namespace

Dataset parse_coco_groundtruth(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) malformed("ground truth must be a JSON object");

  std::unordered_map<std::int64_t, ArtefactClass> categories;
  std::unordered_map<std::int64_t, std::string> unknown_categories;
  if (auto it = doc.find("categories"); it != doc.end()) {
    if (!it->is_array()) malformed("\"categories\" must be an array");
    for (const auto& c : *it) {
      const auto id = int_field(c, "id", "category");
      const auto& name = field(c, "name", "category " + std::to_string(id));
      if (!name.is_string()) malformed("category name must be a string");
      if (categories.contains(id) || unknown_categories.contains(id))
        throw CocoError(CocoErrorKind::kDuplicateId, "COCO: duplicate category id " + std::to_string(id));
      if (auto cls = parse_class(name.get<std::string>()))
        categories.emplace(id, *cls);
      else
        unknown_categories.emplace(id, name.get<std::string>());
    }
  }

  std::vector<ImageRecord> images;
  std::unordered_map<std::int64_t, std::size_t> image_pos;
  const json& images_json = field(doc, "images", "ground truth");
  if (!images_json.is_array()) malformed("\"images\" must be an array");
  images.reserve(images_json.size());
  for (const auto& j : images_json) {
    ImageRecord img;
    img.id = int_field(j, "id", "image");
    const std::string where = "image " + std::to_string(img.id);
    if (auto it = j.find("file_name"); it != j.end() && it->is_string()) img.file_name = it->get<std::string>();
    img.width = dim_field(j, "width", where);
    img.height = dim_field(j, "height", where);
    img.filter = image_filter(j, img.file_name, where);
    if (!image_pos.emplace(img.id, images.size()).second)
      throw CocoError(CocoErrorKind::kDuplicateId, "COCO: duplicate image id " + std::to_string(img.id));
    images.push_back(std::move(img));
  }

  Dataset lookup;
  lookup.set_source_categories(categories);

  std::vector<Annotation> annotations;
  const json& anns_json = field(doc, "annotations", "ground truth");
  if (!anns_json.is_array()) malformed("\"annotations\" must be an array");
  annotations.reserve(anns_json.size());
  for (const auto& j : anns_json) {
    const auto id = int_field(j, "id", "annotation");
    const std::string where = "annotation " + std::to_string(id);
    const auto image_id = int_field(j, "image_id", where);
    auto pos = image_pos.find(image_id);
    if (pos == image_pos.end())
      throw CocoError(CocoErrorKind::kDanglingImageId,
                      "COCO: " + where + " refers to unknown image_id " + std::to_string(image_id));
    if (auto cid = j.find("category_id"); cid != j.end() && cid->is_number_integer() &&
                                           unknown_categories.contains(cid->get<std::int64_t>())) {
      throw CocoError(CocoErrorKind::kUnknownCategory,
                      "COCO: " + where + ": category \"" +
                          unknown_categories.at(cid->get<std::int64_t>()) +
                          "\" is not an artefact class");
    }
    const ArtefactClass cls = resolve_category(j, lookup, where);
    annotations.push_back(build_annotation(j, id, images[pos->second], cls, std::nullopt, where));
  }

  Dataset ds(std::move(images), std::move(annotations));
  ds.set_source_categories(std::move(categories));
  return ds;
}

Dataset parse_coco_predictions(std::string_view text, const Dataset& groundtruth) {
  const json doc = parse_json(text);
  const json* results = &doc;
  if (doc.is_object()) {
    auto it = doc.find("annotations");
    if (it == doc.end()) malformed("predictions object lacks \"annotations\"");
    results = &*it;
  }
  if (!results->is_array()) malformed("predictions must be a JSON array");

  std::vector<Annotation> preds;
  preds.reserve(results->size());
  std::int64_t next_id = 1;
  for (const auto& j : *results) {
    if (!j.is_object()) malformed("prediction entries must be objects");
    std::int64_t id = next_id;
    if (auto it = j.find("id"); it != j.end() && it->is_number_integer()) id = it->get<std::int64_t>();
    next_id = std::max(next_id, id) + 1;
    const std::string where = "prediction " + std::to_string(id);
    const auto image_id = int_field(j, "image_id", where);
    const ImageRecord* img = groundtruth.find_image(image_id);
    if (!img)
      throw CocoError(CocoErrorKind::kDanglingImageId,
                      "COCO: " + where + " refers to unknown image_id " + std::to_string(image_id));
    const ArtefactClass cls = resolve_category(j, groundtruth, where);
    double score = 1.0;
    if (auto it = j.find("score"); it != j.end() && !it->is_null()) score = number(*it, where);
    if (!(score >= 0.0 && score <= 1.0)) malformed(where + ": score outside [0, 1]");
    preds.push_back(build_annotation(j, id, *img, cls, score, where));
  }
  Dataset ds(groundtruth.images(), std::move(preds));
  ds.set_source_categories(groundtruth.source_categories());
  return ds;
}

Dataset parse_coco(std::string_view json_text, CocoKind kind, const Dataset* groundtruth) {
  if (kind == CocoKind::kGroundTruth) return parse_coco_groundtruth(json_text);
  if (!groundtruth) throw InvalidArgument("parse_coco: predictions need a ground-truth dataset");
  return parse_coco_predictions(json_text, *groundtruth);
}

std::string serialize_coco(const Dataset& ds) {
  json doc;
  json images = json::array();
  for (const auto& img : ds.images()) {
    json j{{"id", img.id}, {"file_name", img.file_name}, {"width", img.width}, {"height", img.height}};
    if (img.filter) j["filter"] = std::string(filter_band(*img.filter).label);
    images.push_back(std::move(j));
  }
  json categories = json::array();
  for (ArtefactClass c : kAllClasses) {
    categories.push_back({{"id", class_index(c)},
                          {"name", std::string(class_name(c))},
                          {"supercategory", "artefact"}});
  }
  json annotations = json::array();
  for (const auto& a : ds.annotations()) annotations.push_back(annotation_to_json(a, true));
  doc["images"] = std::move(images);
  doc["categories"] = std::move(categories);
  doc["annotations"] = std::move(annotations);
  return doc.dump() + "\n";
}

std::string serialize_predictions(const Dataset& ds) {
  json results = json::array();
  for (const auto& a : ds.annotations()) results.push_back(annotation_to_json(a, true));
  return results.dump() + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace xami
