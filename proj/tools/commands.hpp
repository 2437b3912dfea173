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

#ifndef XAMI_TOOLS_COMMANDS_HPP_
#define XAMI_TOOLS_COMMANDS_HPP_

#include <iosfwd>

#include "run_config.hpp"

namespace xami::cli {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitItemFailures = 1;  // some inputs failed, the rest were written
inline constexpr int kExitFatal = 2;         // bad config or unreadable primary input

/// rebin -> zscale -> asinh -> 8-bit PNG for every FITS/PNG file in
/// cfg.images; writes <stem>.png, manifest.json and errors.jsonl to cfg.out.
int cmd_preprocess(const RunConfig& cfg, std::ostream& out);

/// Stratified k-fold split of cfg.gt; writes split.json, fold_<i>.json,
/// train.json and val.json (for cfg.val_fold) to cfg.out.
int cmd_split(const RunConfig& cfg, std::ostream& out);

/// Matches cfg.preds against cfg.gt (with faint-object fusion when
/// cfg.fusion is set and cfg.images is given); writes matches.jsonl and the
/// report files to cfg.out.
int cmd_eval(const RunConfig& cfg, std::ostream& out);

/// Filter/class tables and bbox scatter for cfg.gt.
int cmd_stats(const RunConfig& cfg, std::ostream& out);

}  // namespace xami::cli

#endif  // XAMI_TOOLS_COMMANDS_HPP_
