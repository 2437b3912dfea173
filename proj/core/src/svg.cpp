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

#include "xami/svg.hpp"

#include <cstdio>
#include <sstream>

namespace xami::svg {
namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 60;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  const Axes& axes;
  double px(double x) const {
    const double span = axes.x_max - axes.x_min;
    return kLeft + (span > 0 ? (x - axes.x_min) / span : 0.0) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    const double span = axes.y_max - axes.y_min;
    return kHeight - kBottom - (span > 0 ? (y - axes.y_min) / span : 0.0) * (kHeight - kTop - kBottom);
  }
};

void open_plot(std::ostringstream& os, const Frame& f, std::span<const Series> series) {
  const Axes& a = f.axes;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << escape(a.title) << "</text>\n";
  const double x0 = f.px(a.x_min), x1 = f.px(a.x_max), y0 = f.py(a.y_min), y1 = f.py(a.y_max);
  os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0) << "\" height=\""
     << num(y0 - y1) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = a.x_min + (a.x_max - a.x_min) * t / 4.0;
    const double yv = a.y_min + (a.y_max - a.y_min) * t / 4.0;
    os << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << num(y0 + 18) << "\" text-anchor=\"middle\" font-size=\"11\">"
       << num(xv) << "</text>\n";
    os << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(f.py(yv) + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
       << num(yv) << "</text>\n";
  }
  os << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 16)
     << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(a.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << num((y0 + y1) / 2)
     << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << escape(a.y_label) << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
    os << "<rect x=\"" << num(kWidth - kRight + 12) << "\" y=\"" << num(ly - 8) << "\" width=\"10\" height=\"10\" fill=\""
       << series[i].color << "\"/>\n";
    os << "<text x=\"" << num(kWidth - kRight + 28) << "\" y=\"" << num(ly + 1) << "\" font-size=\"12\">"
       << escape(series[i].label) << "</text>\n";
  }
}

}  // namespace

std::string step_plot(const Axes& axes, std::span<const Series> series) {
  std::ostringstream os;
  const Frame f{axes};
  open_plot(os, f, series);
  for (const auto& s : series) {
    if (s.x.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    double prev_y = axes.y_min;
    os << num(f.px(s.x.front())) << ',' << num(f.py(prev_y));
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      os << ' ' << num(f.px(s.x[i])) << ',' << num(f.py(prev_y));
      os << ' ' << num(f.px(s.x[i])) << ',' << num(f.py(s.y[i]));
      prev_y = s.y[i];
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string scatter_plot(const Axes& axes, std::span<const Series> series) {
  std::ostringstream os;
  const Frame f{axes};
  open_plot(os, f, series);
  for (const auto& s : series) {
    os << "<g fill=\"" << s.color << "\" fill-opacity=\"0.5\">\n";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      os << "<circle cx=\"" << num(f.px(s.x[i])) << "\" cy=\"" << num(f.py(s.y[i])) << "\" r=\"2\"/>\n";
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace xami::svg
