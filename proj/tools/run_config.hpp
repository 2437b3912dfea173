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

#ifndef XAMI_TOOLS_RUN_CONFIG_HPP_
#define XAMI_TOOLS_RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "xami/imgproc.hpp"

namespace xami::cli {

/// Every tunable of the pipeline. Loaded from a JSON config file (nested
/// objects or dotted keys), then overridden by command-line flags.
struct RunConfig {
  std::filesystem::path images;
  std::filesystem::path gt;
  std::filesystem::path preds;
  std::filesystem::path out = "out";

  ZScaleParams zscale;
  StretchParams stretch;
  std::size_t rebin_factor = 4;

  std::size_t k = 4;
  std::uint64_t seed = 0;
  std::size_t val_fold = 0;

  double iou_threshold = 0.5;
  bool class_aware = true;
  bool fusion = true;
  double background_k_clip = 3.0;
  std::size_t background_iterations = 5;

  bool report_plots = true;
  bool report_losses = true;

  std::size_t jobs = 1;

  /// Range checks shared by all commands; throws InvalidArgument.
  void validate() const;
};

/// Applies a JSON config document on top of `base`. Unknown keys are errors.
/// Relative paths are taken relative to `base_dir` when it is non-empty.
RunConfig apply_config_json(RunConfig base, std::string_view json, const std::filesystem::path& base_dir = {});
/// Paths in the file resolve against the file's directory.
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

/// The effective configuration, as a JSON document with dotted keys.
std::string config_to_json(const RunConfig& cfg);

}  // namespace xami::cli

#endif  // XAMI_TOOLS_RUN_CONFIG_HPP_
