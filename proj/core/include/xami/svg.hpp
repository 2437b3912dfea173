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

#ifndef XAMI_SVG_HPP_
#define XAMI_SVG_HPP_

#include <span>
#include <string>
#include <vector>

namespace xami::svg {

struct Series {
  std::string label;
  std::string color;  // any SVG colour, e.g. "#1f77b4"
  std::vector<double> x;
  std::vector<double> y;
};

struct Axes {
  std::string title;
  std::string x_label;
  std::string y_label;
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
};

/// Post-style step lines (empirical CDFs).
std::string step_plot(const Axes& axes, std::span<const Series> series);
/// One dot per point.
std::string scatter_plot(const Axes& axes, std::span<const Series> series);

}  // namespace xami::svg

#endif  // XAMI_SVG_HPP_
