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

#include "xami/stats.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace xami {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

StatsTable dataset_stats(const Dataset& ds) {
  StatsTable t;
  for (const auto& band : all_filter_bands()) t.filters.push_back({band, 0, 0});
  for (ArtefactClass c : kAllClasses) t.classes[class_index(c)] = {c, 0, 0.0};

  for (const auto& img : ds.images()) {
    const std::size_t masks = ds.annotations_of(img.id).size();
    if (img.filter) {
      auto& row = t.filters[static_cast<std::size_t>(*img.filter)];
      ++row.images;
      row.masks += masks;
    } else {
      ++t.unknown_filter_images;
      t.unknown_filter_masks += masks;
    }
  }
  for (const auto& a : ds.annotations()) {
    ++t.classes[class_index(a.cls)].count;
    t.boxes.push_back({a.cls, a.bbox.w, a.bbox.h});
  }
  t.total_images = ds.images().size();
  t.total_masks = ds.annotations().size();
  for (auto& row : t.classes)
    row.percent = t.total_masks ? 100.0 * static_cast<double>(row.count) / static_cast<double>(t.total_masks) : 0.0;
  for (const auto& row : t.filters) t.filter_image_sum += row.images;
  t.image_count_discrepancy =
      static_cast<long long>(t.filter_image_sum) - static_cast<long long>(kReferenceImageCount);
  return t;
}

std::string filters_csv(const StatsTable& t) {
  std::ostringstream os;
  os << "filter,wavelength_nm,width_nm,images,masks\n";
  for (const auto& r : t.filters)
    os << r.band.label << ',' << fixed(r.band.central_wavelength_nm, 0) << ','
       << fixed(r.band.width_nm, 0) << ',' << r.images << ',' << r.masks << '\n';
  os << "unknown,,," << t.unknown_filter_images << ',' << t.unknown_filter_masks << '\n';
  os << "total,,," << t.total_images << ',' << t.total_masks << '\n';
  return os.str();
}

std::string classes_csv(const StatsTable& t) {
  std::ostringstream os;
  os << "class,count,percent\n";
  for (const auto& r : t.classes)
    os << class_name(r.cls) << ',' << r.count << ',' << fixed(r.percent, 2) << '\n';
  return os.str();
}

std::string boxes_csv(const StatsTable& t) {
  std::ostringstream os;
  os << "class,width,height\n";
  for (const auto& b : t.boxes) os << class_name(b.cls) << ',' << fixed(b.width, 3) << ',' << fixed(b.height, 3) << '\n';
  return os.str();
}

std::string stats_json(const StatsTable& t) {
  using nlohmann::ordered_json;
  ordered_json doc;
  ordered_json filters = ordered_json::array();
  for (const auto& r : t.filters)
    filters.push_back({{"filter", std::string(r.band.label)},
                       {"wavelength_nm", r.band.central_wavelength_nm},
                       {"width_nm", r.band.width_nm},
                       {"images", r.images},
                       {"masks", r.masks}});
  doc["filters"] = std::move(filters);
  doc["unknown_filter"] = {{"images", t.unknown_filter_images}, {"masks", t.unknown_filter_masks}};
  ordered_json classes = ordered_json::array();
  for (const auto& r : t.classes)
    classes.push_back({{"class", std::string(class_name(r.cls))}, {"count", r.count}, {"percent", r.percent}});
  doc["classes"] = std::move(classes);
  doc["total_images"] = t.total_images;
  doc["total_masks"] = t.total_masks;
  doc["filter_image_sum"] = t.filter_image_sum;
  doc["reference_image_count"] = kReferenceImageCount;
  doc["image_count_discrepancy"] = t.image_count_discrepancy;
  return doc.dump(2) + "\n";
}

std::string format_stats(const StatsTable& t) {
  std::ostringstream os;
  char line[160];
  os << "Filter    lambda(nm)  width  #images  #masks\n";
  for (const auto& r : t.filters) {
    std::snprintf(line, sizeof line, "%-8s  %10.0f  %5.0f  %7zu  %6zu\n", std::string(r.band.label).c_str(),
                  r.band.central_wavelength_nm, r.band.width_nm, r.images, r.masks);
    os << line;
  }
  if (t.unknown_filter_images) {
    std::snprintf(line, sizeof line, "%-8s  %10s  %5s  %7zu  %6zu\n", "unknown", "-", "-",
                  t.unknown_filter_images, t.unknown_filter_masks);
    os << line;
  }
  std::snprintf(line, sizeof line, "per-filter image sum %zu vs reference %zu (difference %+lld)\n",
                t.filter_image_sum, kReferenceImageCount, t.image_count_discrepancy);
  os << line << "\nClass   count  percent\n";
  for (const auto& r : t.classes) {
    std::snprintf(line, sizeof line, "%-6s  %5zu  %6.2f%%\n", std::string(class_name(r.cls)).c_str(), r.count,
                  r.percent);
    os << line;
  }
  std::snprintf(line, sizeof line, "total   %5zu masks in %zu images\n", t.total_masks, t.total_images);
  os << line;
  return os.str();
}

}  // namespace xami
