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

#include "run_config.hpp"

#include <functional>
#include <map>

#include "json.hpp"
#include "xami/coco.hpp"
#include "xami/error.hpp"

namespace xami::cli {
namespace {

using nlohmann::json;

void flatten(const json& node, const std::string& prefix, std::map<std::string, json>& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items())
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
  } else {
    out[prefix] = node;
  }
}

template <typename T>
T as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument("config: \"" + key + "\" has the wrong type");
  }
}

std::size_t as_count(const json& v, const std::string& key) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw InvalidArgument("config: \"" + key + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

}  // namespace

void RunConfig::validate() const {
  zscale.validate();
  stretch.validate();
  if (rebin_factor < 1) throw InvalidArgument("rebin.factor must be >= 1");
  if (k < 2) throw InvalidArgument("split.k must be >= 2");
  if (val_fold >= k) throw InvalidArgument("split.val_fold must be < split.k");
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0))
    throw InvalidArgument("matching.iou_threshold must be in (0, 1]");
  if (!(background_k_clip > 0.0)) throw InvalidArgument("background.k_clip must be > 0");
  if (jobs < 1) throw InvalidArgument("jobs must be >= 1");
}

RunConfig apply_config_json(RunConfig cfg, std::string_view text, const std::filesystem::path& base_dir) {
  auto resolve = [&](const std::filesystem::path& p) {
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidArgument("config: top level must be an object");
  std::map<std::string, json> flat;
  flatten(doc, "", flat);

  using Setter = std::function<void(const json&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"paths.images", [&](const json& v, const std::string& k) { cfg.images = resolve(as<std::string>(v, k)); }},
      {"paths.gt", [&](const json& v, const std::string& k) { cfg.gt = resolve(as<std::string>(v, k)); }},
      {"paths.preds", [&](const json& v, const std::string& k) { cfg.preds = resolve(as<std::string>(v, k)); }},
      {"paths.out", [&](const json& v, const std::string& k) { cfg.out = resolve(as<std::string>(v, k)); }},
      {"zscale.n_samples", [&](const json& v, const std::string& k) { cfg.zscale.n_samples = as_count(v, k); }},
      {"zscale.contrast", [&](const json& v, const std::string& k) { cfg.zscale.contrast = as<double>(v, k); }},
      {"zscale.k_rej", [&](const json& v, const std::string& k) { cfg.zscale.k_rej = as<double>(v, k); }},
      {"zscale.max_iterations",
       [&](const json& v, const std::string& k) { cfg.zscale.max_iterations = as_count(v, k); }},
      {"zscale.max_reject_fraction",
       [&](const json& v, const std::string& k) { cfg.zscale.max_reject_fraction = as<double>(v, k); }},
      {"zscale.min_pixels", [&](const json& v, const std::string& k) { cfg.zscale.min_pixels = as_count(v, k); }},
      {"stretch.a", [&](const json& v, const std::string& k) { cfg.stretch.a = as<double>(v, k); }},
      {"rebin.factor", [&](const json& v, const std::string& k) { cfg.rebin_factor = as_count(v, k); }},
      {"split.k", [&](const json& v, const std::string& k) { cfg.k = as_count(v, k); }},
      {"split.seed", [&](const json& v, const std::string& k) { cfg.seed = as<std::uint64_t>(v, k); }},
      {"split.val_fold", [&](const json& v, const std::string& k) { cfg.val_fold = as_count(v, k); }},
      {"matching.iou_threshold", [&](const json& v, const std::string& k) { cfg.iou_threshold = as<double>(v, k); }},
      {"matching.class_aware", [&](const json& v, const std::string& k) { cfg.class_aware = as<bool>(v, k); }},
      {"matching.fusion", [&](const json& v, const std::string& k) { cfg.fusion = as<bool>(v, k); }},
      {"background.k_clip", [&](const json& v, const std::string& k) { cfg.background_k_clip = as<double>(v, k); }},
      {"background.iterations",
       [&](const json& v, const std::string& k) { cfg.background_iterations = as_count(v, k); }},
      {"report.plots", [&](const json& v, const std::string& k) { cfg.report_plots = as<bool>(v, k); }},
      {"report.losses", [&](const json& v, const std::string& k) { cfg.report_losses = as<bool>(v, k); }},
      {"jobs", [&](const json& v, const std::string& k) { cfg.jobs = as_count(v, k); }},
  };
  for (const auto& [key, value] : flat) {
    auto it = setters.find(key);
    if (it == setters.end()) throw InvalidArgument("config: unknown key \"" + key + "\"");
    it->second(value, key);
  }
  return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  return apply_config_json(std::move(base), read_text_file(path), path.parent_path());
}

std::string config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["paths.images"] = cfg.images.string();
  j["paths.gt"] = cfg.gt.string();
  j["paths.preds"] = cfg.preds.string();
  j["paths.out"] = cfg.out.string();
  j["zscale.n_samples"] = cfg.zscale.n_samples;
  j["zscale.contrast"] = cfg.zscale.contrast;
  j["zscale.k_rej"] = cfg.zscale.k_rej;
  j["zscale.max_iterations"] = cfg.zscale.max_iterations;
  j["zscale.max_reject_fraction"] = cfg.zscale.max_reject_fraction;
  j["zscale.min_pixels"] = cfg.zscale.min_pixels;
  j["stretch.a"] = cfg.stretch.a;
  j["rebin.factor"] = cfg.rebin_factor;
  j["split.k"] = cfg.k;
  j["split.seed"] = cfg.seed;
  j["split.val_fold"] = cfg.val_fold;
  j["matching.iou_threshold"] = cfg.iou_threshold;
  j["matching.class_aware"] = cfg.class_aware;
  j["matching.fusion"] = cfg.fusion;
  j["background.k_clip"] = cfg.background_k_clip;
  j["background.iterations"] = cfg.background_iterations;
  j["report.plots"] = cfg.report_plots;
  j["report.losses"] = cfg.report_losses;
  j["jobs"] = cfg.jobs;
  return j.dump(2) + "\n";
}

}  // namespace xami::cli
