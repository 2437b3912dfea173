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

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <map>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "xami/error.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("xami");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("XAMI_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

struct Flags {
  std::string config;
  std::string images, gt, preds, out;
  std::size_t k = 0, val_fold = 0, jobs = 0, rebin = 0;
  std::uint64_t seed = 0;
  double iou_threshold = 0.0;
  bool no_fusion = false, class_agnostic = false, no_plots = false, no_losses = false;
};

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Preprocessing, splitting and instance-matching evaluation for XMM-OM artefact masks"};
  app.require_subcommand(1);
  Flags f;

  std::map<std::string, CLI::Option*> opt;
  auto common = [&](CLI::App* sub) {
    opt["config"] = sub->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
    opt["out"] = sub->add_option("--out", f.out, "output directory");
    opt["jobs"] = sub->add_option("--jobs", f.jobs, "worker threads")->check(CLI::Range(1, 1024));
  };

  auto* pre = app.add_subcommand("preprocess", "rebin, zscale, asinh stretch and 8-bit PNG export");
  common(pre);
  pre->add_option("--images", f.images, "directory of FITS/PNG images");
  pre->add_option("--rebin", f.rebin, "rebin factor");

  auto* split = app.add_subcommand("split", "stratified k-fold split of a COCO ground truth file");
  common(split);
  split->add_option("--gt", f.gt, "COCO ground truth JSON");
  split->add_option("--k", f.k, "number of folds");
  split->add_option("--seed", f.seed, "shuffle seed");
  split->add_option("--val-fold", f.val_fold, "fold written as val.json");

  auto* eval = app.add_subcommand("eval", "match predictions to ground truth and report precision/recall");
  common(eval);
  eval->add_option("--gt", f.gt, "COCO ground truth JSON");
  eval->add_option("--preds", f.preds, "COCO results JSON");
  eval->add_option("--images", f.images, "image directory (enables faint-object fusion)");
  eval->add_option("--iou-threshold", f.iou_threshold, "IoU threshold in (0,1]");
  eval->add_flag("--no-fusion", f.no_fusion, "disable faint-object fusion");
  eval->add_flag("--class-agnostic", f.class_agnostic, "allow cross-class matches");
  eval->add_flag("--no-plots", f.no_plots, "skip SVG output");
  eval->add_flag("--no-losses", f.no_losses, "skip dice/focal loss computation");

  auto* stats = app.add_subcommand("stats", "per-filter and per-class dataset statistics");
  common(stats);
  stats->add_option("--gt", f.gt, "COCO ground truth JSON");
  stats->add_flag("--no-plots", f.no_plots, "skip SVG output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : xami::cli::kExitFatal;
  }

  xami::cli::RunConfig cfg;
  try {
    if (!f.config.empty()) cfg = xami::cli::load_config_file(f.config, cfg);
  } catch (const std::exception& e) {
    spdlog::error("config: {}", e.what());
    return xami::cli::kExitFatal;
  }
  auto given = [&](const char* name) {
    for (auto* sub : app.get_subcommands())
      if (const auto* o = sub->get_option_no_throw(name); o && o->count() > 0) return true;
    return false;
  };
  if (given("--images")) cfg.images = f.images;
  if (given("--gt")) cfg.gt = f.gt;
  if (given("--preds")) cfg.preds = f.preds;
  if (given("--out")) cfg.out = f.out;
  if (given("--jobs")) cfg.jobs = f.jobs;
  if (given("--rebin")) cfg.rebin_factor = f.rebin;
  if (given("--k")) cfg.k = f.k;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--val-fold")) cfg.val_fold = f.val_fold;
  if (given("--iou-threshold")) cfg.iou_threshold = f.iou_threshold;
  if (f.no_fusion) cfg.fusion = false;
  if (f.class_agnostic) cfg.class_aware = false;
  if (f.no_plots) cfg.report_plots = false;
  if (f.no_losses) cfg.report_losses = false;
  spdlog::debug("effective config: {}", xami::cli::config_to_json(cfg));

  if (pre->parsed()) return xami::cli::cmd_preprocess(cfg, std::cout);
  if (split->parsed()) return xami::cli::cmd_split(cfg, std::cout);
  if (eval->parsed()) return xami::cli::cmd_eval(cfg, std::cout);
  return xami::cli::cmd_stats(cfg, std::cout);
}
