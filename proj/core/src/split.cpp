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

#include <cstdio>
#include <random>
#include <sstream>

#include "json.hpp"
#include "xami/error.hpp"

namespace xami {
namespace {

// Fisher-Yates driven directly by mt19937_64 so the permutation does not
// depend on the standard library's distribution implementation.
std::vector<std::size_t> seeded_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

}  // namespace

SplitSpec stratified_kfold(const Dataset& ds, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("stratified_kfold: k must be >= 2");
  const auto& images = ds.images();
  if (k > images.size())
    throw InvalidArgument("stratified_kfold: k = " + std::to_string(k) + " exceeds image count " +
                          std::to_string(images.size()));

  using Counts = std::array<std::size_t, kNumClasses>;
  std::vector<Counts> per_image(images.size(), Counts{});
  Counts remaining{};
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t a : ds.annotations_of(images[i].id)) {
      const auto c = class_index(ds.annotations()[a].cls);
      ++per_image[i][c];
      ++remaining[c];
    }
  }

  const auto order = seeded_order(images.size(), seed);
  std::array<std::vector<std::size_t>, kNumClasses> holders;  // seeded order
  std::vector<std::size_t> unlabelled;
  std::size_t labelled = 0;
  for (std::size_t i : order) {
    bool any = false;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      if (per_image[i][c]) {
        holders[c].push_back(i);
        any = true;
      }
    }
    if (any)
      ++labelled;
    else
      unlabelled.push_back(i);
  }

  const double kd = static_cast<double>(k);
  std::vector<std::array<double, kNumClasses>> demand(k);
  std::vector<double> capacity(k, static_cast<double>(labelled) / kd);
  for (auto& d : demand)
    for (std::size_t c = 0; c < kNumClasses; ++c) d[c] = static_cast<double>(remaining[c]) / kd;

  SplitSpec spec;
  spec.k = k;
  spec.seed = seed;
  std::vector<char> assigned(images.size(), 0);

  while (true) {
    std::size_t cls = kNumClasses;
    for (std::size_t c = 0; c < kNumClasses; ++c)
      if (remaining[c] > 0 && (cls == kNumClasses || remaining[c] < remaining[cls])) cls = c;
    if (cls == kNumClasses) break;

    for (std::size_t i : holders[cls]) {
      if (assigned[i]) continue;
      std::size_t best = 0;
      for (std::size_t j = 1; j < k; ++j) {
        if (demand[j][cls] > demand[best][cls] ||
            (demand[j][cls] == demand[best][cls] && capacity[j] > capacity[best]))
          best = j;
      }
      assigned[i] = 1;
      spec.fold_of[images[i].id] = best;
      capacity[best] -= 1.0;
      for (std::size_t c = 0; c < kNumClasses; ++c) {
        demand[best][c] -= static_cast<double>(per_image[i][c]);
        remaining[c] -= per_image[i][c];
      }
    }
  }

  for (std::size_t n = 0; n < unlabelled.size(); ++n) spec.fold_of[images[unlabelled[n]].id] = n % k;
  return spec;
}

SplitSides materialize_split(const Dataset& ds, const SplitSpec& spec, std::size_t val_fold) {
  if (val_fold >= spec.k)
    throw InvalidArgument("materialize_split: fold " + std::to_string(val_fold) +
                          " out of range for k = " + std::to_string(spec.k));
  auto fold = [&](std::int64_t id) {
    auto it = spec.fold_of.find(id);
    if (it == spec.fold_of.end())
      throw InvalidArgument("materialize_split: image " + std::to_string(id) + " has no fold");
    return it->second;
  };
  for (const auto& img : ds.images()) fold(img.id);
  return {ds.filter_images([&](std::int64_t id) { return fold(id) != val_fold; }),
          ds.filter_images([&](std::int64_t id) { return fold(id) == val_fold; })};
}

std::vector<std::array<std::size_t, kNumClasses>> fold_class_counts(const Dataset& ds,
                                                                     const SplitSpec& spec) {
  std::vector<std::array<std::size_t, kNumClasses>> out(spec.k, std::array<std::size_t, kNumClasses>{});
  for (const auto& a : ds.annotations()) {
    auto it = spec.fold_of.find(a.image_id);
    if (it == spec.fold_of.end()) continue;
    ++out[it->second][class_index(a.cls)];
  }
  return out;
}

std::string split_manifest_json(const SplitSpec& spec) {
  nlohmann::ordered_json folds = nlohmann::ordered_json::object();
  for (const auto& [id, f] : spec.fold_of) folds[std::to_string(id)] = f;
  nlohmann::ordered_json doc;
  doc["k"] = spec.k;
  doc["seed"] = spec.seed;
  doc["folds"] = std::move(folds);
  return doc.dump(2) + "\n";
}

SplitSpec parse_split_manifest(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    SplitSpec spec;
    spec.k = doc.at("k").get<std::size_t>();
    spec.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& [key, value] : doc.at("folds").items()) {
      const auto f = value.get<std::size_t>();
      if (f >= spec.k) throw InvalidArgument("split manifest: fold " + std::to_string(f) + " >= k");
      spec.fold_of[std::stoll(key)] = f;
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("split manifest: ") + e.what());
  } catch (const std::logic_error& e) {
    throw InvalidArgument(std::string("split manifest: ") + e.what());
  }
}

std::string format_split_table(const Dataset& ds, const SplitSpec& spec) {
  const auto counts = fold_class_counts(ds, spec);
  std::vector<std::size_t> images(spec.k, 0);
  for (const auto& [id, f] : spec.fold_of) ++images[f];
  std::ostringstream os;
  char cell[64];
  os << "fold  images  masks";
  for (ArtefactClass c : kAllClasses) {
    std::snprintf(cell, sizeof cell, "  %15s", std::string(class_name(c)).c_str());
    os << cell;
  }
  os << '\n';
  for (std::size_t f = 0; f < spec.k; ++f) {
    std::size_t total = 0;
    for (auto n : counts[f]) total += n;
    std::snprintf(cell, sizeof cell, "%4zu  %6zu  %5zu", f, images[f], total);
    os << cell;
    for (auto n : counts[f]) {
      const double pct = total ? 100.0 * static_cast<double>(n) / static_cast<double>(total) : 0.0;
      std::snprintf(cell, sizeof cell, "  %6zu (%5.2f%%)", n, pct);
      os << cell;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace xami
