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

#include "commands.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "xami/coco.hpp"
#include "xami/error.hpp"
#include "xami/fits.hpp"
#include "xami/matching.hpp"
#include "xami/parallel.hpp"
#include "xami/png_io.hpp"
#include "xami/report.hpp"
#include "xami/split.hpp"
#include "xami/stats.hpp"
#include "xami/svg.hpp"

namespace xami::cli {
namespace fs = std::filesystem;
namespace {

using nlohmann::ordered_json;

std::string lower_ext(const fs::path& p) {
  std::string ext = p.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

bool is_fits(const fs::path& p) {
  const auto e = lower_ext(p);
  return e == ".fits" || e == ".fit" || e == ".fts";
}

bool is_png(const fs::path& p) { return lower_ext(p) == ".png"; }

PixelGrid load_image(const fs::path& p) {
  if (is_fits(p)) return read_fits_file(p);
  if (is_png(p)) return read_png_file(p);
  throw Error("unsupported image type: " + p.filename().string());
}

void require_file(const fs::path& p, const char* what) {
  if (p.empty()) throw InvalidArgument(std::string("missing --") + what);
  if (!fs::is_regular_file(p)) throw InvalidArgument(std::string(what) + " file not found: " + p.string());
}

void require_dir(const fs::path& p, const char* what) {
  if (p.empty()) throw InvalidArgument(std::string("missing --") + what);
  if (!fs::is_directory(p)) throw InvalidArgument(std::string(what) + " directory not found: " + p.string());
}

std::string error_line(const std::string& item, const std::string& message) {
  return ordered_json{{"item", item}, {"error", message}}.dump() + "\n";
}

// Runs a command body, mapping library errors to the fatal exit code.
template <typename Body>
int guarded(const char* name, Body&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    spdlog::error("{}: {}", name, e.what());
    return kExitFatal;
  }
}

Dataset load_groundtruth(const RunConfig& cfg) {
  require_file(cfg.gt, "gt");
  return parse_coco_groundtruth(read_text_file(cfg.gt));
}

}  // namespace

int cmd_preprocess(const RunConfig& cfg, std::ostream& out) {
  return guarded("preprocess", [&] {
    cfg.validate();
    require_dir(cfg.images, "images");
    fs::create_directories(cfg.out);

    std::vector<fs::path> inputs;
    for (const auto& entry : fs::directory_iterator(cfg.images))
      if (entry.is_regular_file() && (is_fits(entry.path()) || is_png(entry.path()))) inputs.push_back(entry.path());
    std::sort(inputs.begin(), inputs.end());

    struct Outcome {
      bool ok = false;
      std::string error;
      std::size_t width = 0, height = 0;
      ZScaleLimits limits{0.0, 0.0};
      std::string output;
    };
    std::vector<Outcome> outcomes(inputs.size());
    parallel_for(inputs.size(), cfg.jobs, [&](std::size_t i) {
      Outcome& o = outcomes[i];
      try {
        const PixelGrid raw = load_image(inputs[i]);
        const PixelGrid binned = rebin(raw, cfg.rebin_factor);
        o.limits = zscale_limits(binned, cfg.zscale);
        const PixelGrid stretched = asinh_stretch(binned, o.limits.z1, o.limits.z2, cfg.stretch);
        const auto png = write_png_grayscale(to_eight_bit(stretched), 8);
        o.output = inputs[i].stem().string() + ".png";
        const fs::path target = cfg.out / o.output;
        if (fs::exists(target) && fs::equivalent(target, inputs[i]))
          throw Error("output would overwrite its own input");
        std::ofstream f(target, std::ios::binary | std::ios::trunc);
        f.write(reinterpret_cast<const char*>(png.data()), static_cast<std::streamsize>(png.size()));
        if (!f) throw Error("cannot write " + target.string());
        o.width = binned.width();
        o.height = binned.height();
        o.ok = true;
      } catch (const std::exception& e) {
        o.error = e.what();
      }
    });

    ordered_json images = ordered_json::array();
    ordered_json failures = ordered_json::array();
    std::string errors;
    std::size_t failed = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const auto name = inputs[i].filename().string();
      const Outcome& o = outcomes[i];
      if (o.ok) {
        images.push_back({{"input", name},
                          {"output", o.output},
                          {"width", o.width},
                          {"height", o.height},
                          {"z1", o.limits.z1},
                          {"z2", o.limits.z2}});
      } else {
        ++failed;
        spdlog::error("preprocess: {}: {}", name, o.error);
        failures.push_back({{"input", name}, {"error", o.error}});
        errors += error_line(name, o.error);
      }
    }
    ordered_json manifest;
    manifest["steps"] = {"rebin", "zscale", "asinh", "8bit"};
    manifest["params"] = {{"rebin.factor", cfg.rebin_factor},
                          {"zscale.n_samples", cfg.zscale.n_samples},
                          {"zscale.contrast", cfg.zscale.contrast},
                          {"zscale.k_rej", cfg.zscale.k_rej},
                          {"zscale.max_iterations", cfg.zscale.max_iterations},
                          {"zscale.max_reject_fraction", cfg.zscale.max_reject_fraction},
                          {"zscale.min_pixels", cfg.zscale.min_pixels},
                          {"stretch.a", cfg.stretch.a}};
    manifest["images"] = std::move(images);
    manifest["failures"] = std::move(failures);
    write_text_file(cfg.out / "manifest.json", manifest.dump(2) + "\n");
    write_text_file(cfg.out / "errors.jsonl", errors);

    out << "preprocessed " << inputs.size() - failed << " of " << inputs.size() << " images into "
        << cfg.out.string() << "\n";
    return failed ? kExitItemFailures : kExitOk;
  });
}

int cmd_split(const RunConfig& cfg, std::ostream& out) {
  return guarded("split", [&] {
    cfg.validate();
    const Dataset ds = load_groundtruth(cfg);
    const SplitSpec spec = stratified_kfold(ds, cfg.k, cfg.seed);
    fs::create_directories(cfg.out);
    write_text_file(cfg.out / "split.json", split_manifest_json(spec));
    for (std::size_t f = 0; f < spec.k; ++f) {
      const Dataset fold = ds.filter_images([&](std::int64_t id) { return spec.fold_of.at(id) == f; });
      write_text_file(cfg.out / ("fold_" + std::to_string(f) + ".json"), serialize_coco(fold));
    }
    const SplitSides sides = materialize_split(ds, spec, cfg.val_fold);
    write_text_file(cfg.out / "train.json", serialize_coco(sides.train));
    write_text_file(cfg.out / "val.json", serialize_coco(sides.val));
    out << "k=" << spec.k << " seed=" << spec.seed << " validation fold=" << cfg.val_fold << "\n";
    out << format_split_table(ds, spec);
    return kExitOk;
  });
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  return guarded("eval", [&] {
    cfg.validate();
    const Dataset gt = load_groundtruth(cfg);
    require_file(cfg.preds, "preds");
    Dataset preds = parse_coco_predictions(read_text_file(cfg.preds), gt);
    fs::create_directories(cfg.out);

    const bool fusion = cfg.fusion && !cfg.images.empty();
    std::string errors;
    std::size_t failed = 0;
    if (fusion) {
      require_dir(cfg.images, "images");
      const auto& imgs = gt.images();
      std::vector<std::vector<Annotation>> fused(imgs.size());
      std::vector<std::string> failures(imgs.size());
      parallel_for(imgs.size(), cfg.jobs, [&](std::size_t i) {
        const auto& ids = preds.annotations_of(imgs[i].id);
        for (auto k : ids) fused[i].push_back(preds.annotations()[k]);
        if (ids.empty()) return;
        try {
          const PixelGrid grid = load_image(cfg.images / imgs[i].file_name);
          if (grid.width() != imgs[i].width || grid.height() != imgs[i].height)
            throw Error("image is " + std::to_string(grid.width()) + "x" + std::to_string(grid.height()) +
                        ", annotations expect " + std::to_string(imgs[i].width) + "x" +
                        std::to_string(imgs[i].height));
          const BackgroundStats bg = background_stats(grid, cfg.background_k_clip, cfg.background_iterations);
          for (auto& a : fused[i]) a = fuse_prediction(a, grid, bg);
        } catch (const std::exception& e) {
          failures[i] = e.what();
        }
      });
      std::vector<Annotation> all;
      for (std::size_t i = 0; i < imgs.size(); ++i) {
        if (!failures[i].empty()) {
          ++failed;
          spdlog::error("eval: fusion skipped for {}: {}", imgs[i].file_name, failures[i]);
          errors += error_line(imgs[i].file_name, failures[i]);
        }
        for (auto& a : fused[i]) all.push_back(std::move(a));
      }
      // Keep file order so per-image prediction indices stay stable.
      std::map<std::int64_t, std::size_t> pos;
      for (std::size_t i = 0; i < preds.annotations().size(); ++i) pos[preds.annotations()[i].id] = i;
      std::sort(all.begin(), all.end(), [&](const Annotation& a, const Annotation& b) { return pos[a.id] < pos[b.id]; });
      Dataset fused_ds(gt.images(), std::move(all));
      fused_ds.set_source_categories(preds.source_categories());
      preds = std::move(fused_ds);
    } else if (cfg.fusion) {
      spdlog::info("eval: no --images given, faint-object fusion disabled");
    }

    MatchOptions mo;
    mo.iou_threshold = cfg.iou_threshold;
    mo.class_aware = cfg.class_aware;
    const auto matches = match_dataset(gt, preds, mo, cfg.jobs);

    std::ostringstream jsonl;
    for (const auto& m : matches) {
      std::vector<Annotation> g, p;
      for (auto k : gt.annotations_of(m.image_id)) g.push_back(gt.annotations()[k]);
      for (auto k : preds.annotations_of(m.image_id)) p.push_back(preds.annotations()[k]);
      jsonl << match_record_json(m, p, g) << '\n';
    }
    write_text_file(cfg.out / "matches.jsonl", jsonl.str());

    ReportOptions ro;
    ro.iou_threshold = cfg.iou_threshold;
    ro.class_aware = cfg.class_aware;
    ro.fusion = fusion;
    ro.losses = cfg.report_losses;
    ro.plots = cfg.report_plots;
    ro.jobs = cfg.jobs;
    const MetricsReport report = build_report(gt, preds, matches, ro);
    write_report_files(report, gt, cfg.out);
    write_text_file(cfg.out / "errors.jsonl", errors);
    out << format_report_table(report);
    return failed ? kExitItemFailures : kExitOk;
  });
}

int cmd_stats(const RunConfig& cfg, std::ostream& out) {
  return guarded("stats", [&] {
    const Dataset ds = load_groundtruth(cfg);
    const StatsTable t = dataset_stats(ds);
    fs::create_directories(cfg.out);
    write_text_file(cfg.out / "stats.json", stats_json(t));
    write_text_file(cfg.out / "stats_filters.csv", filters_csv(t));
    write_text_file(cfg.out / "stats_classes.csv", classes_csv(t));
    write_text_file(cfg.out / "bbox_scatter.csv", boxes_csv(t));
    if (cfg.report_plots) {
      static constexpr const char* kColors[kNumClasses] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};
      std::vector<svg::Series> series;
      double max_dim = 1.0;
      for (ArtefactClass c : kAllClasses)
        series.push_back({std::string(class_name(c)), kColors[class_index(c)], {}, {}});
      for (const auto& b : t.boxes) {
        auto& s = series[class_index(b.cls)];
        s.x.push_back(b.width);
        s.y.push_back(b.height);
        max_dim = std::max({max_dim, b.width, b.height});
      }
      svg::Axes axes{"Annotation bounding boxes", "width (px)", "height (px)", 0.0, max_dim, 0.0, max_dim};
      write_text_file(cfg.out / "bbox_scatter.svg", svg::scatter_plot(axes, series));
    }
    out << format_stats(t);
    return kExitOk;
  });
}

}  // namespace xami::cli
