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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace xami::testing {

std::pair<double, double> reference_zscale(const std::vector<double>& pixels, const ZScaleParams& p) {
  std::vector<double> finite;
  for (double v : pixels)
    if (std::isfinite(v)) finite.push_back(v);
  if (finite.size() < p.min_pixels) throw std::invalid_argument("reference_zscale: too few pixels");

  // Even stride over the finite pixels, at most n_samples of them.
  const std::size_t stride = std::max<std::size_t>(1, finite.size() / p.n_samples);
  std::vector<double> y;
  for (std::size_t i = 0; i < finite.size() && y.size() < p.n_samples; i += stride) y.push_back(finite[i]);
  std::sort(y.begin(), y.end());
  const std::size_t n = y.size();
  const double lo = y.front(), hi = y.back();

  std::vector<std::size_t> good(n);
  std::iota(good.begin(), good.end(), 0);

  // Ordinary least squares y = a + b x over the index list, normal equations.
  auto fit = [&](const std::vector<std::size_t>& idx) {
    long double s = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (std::size_t i : idx) {
      const long double x = static_cast<long double>(i);
      s += 1;
      sx += x;
      sxx += x * x;
      sy += y[i];
      sxy += x * y[i];
    }
    const long double det = s * sxx - sx * sx;
    if (s == 0 || det == 0) return std::pair<double, double>{s ? static_cast<double>(sy / s) : 0.0, 0.0};
    const long double b = (s * sxy - sx * sy) / det;
    const long double a = (sy - b * sx) / s;
    return std::pair<double, double>{static_cast<double>(a), static_cast<double>(b)};
  };

  const std::size_t allowed_rejects = static_cast<std::size_t>(std::floor(n * p.max_reject_fraction));
  const std::size_t min_good = std::max(p.min_pixels, n - allowed_rejects);
  const double tiny = 1e-12 * std::max(1.0, hi - lo);

  for (std::size_t it = 0; it < p.max_iterations; ++it) {
    const auto [a, b] = fit(good);
    double ss = 0;
    for (std::size_t i : good) ss += std::pow(y[i] - (a + b * i), 2);
    const double sigma = std::sqrt(ss / good.size());
    if (sigma <= tiny) break;

    std::vector<bool> bad(n, false);
    for (std::size_t i = 0; i < n; ++i) bad[i] = std::find(good.begin(), good.end(), i) == good.end();
    std::vector<bool> flagged(n, false);
    for (std::size_t i = 0; i < n; ++i)
      if (std::fabs(y[i] - (a + b * i)) > p.k_rej * sigma) flagged[i] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!flagged[i]) continue;
      bad[i] = true;
      if (i > 0) bad[i - 1] = true;
      if (i + 1 < n) bad[i + 1] = true;
    }
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < n; ++i)
      if (!bad[i]) next.push_back(i);
    if (next.size() == good.size()) break;
    good = std::move(next);
    if (good.size() < min_good) break;
  }
  if (good.size() < min_good) return {lo, hi};

  const double slope = fit(good).second;
  if (slope <= 0) return {lo, hi};
  const double median = n % 2 ? y[n / 2] : (y[n / 2 - 1] + y[n / 2]) / 2;
  const double mid = static_cast<double>((n - 1) / 2);
  return {std::max(lo, median - mid * slope / p.contrast),
          std::min(hi, median + (static_cast<double>(n) - mid) * slope / p.contrast)};
}

BruteForceAssignment brute_force_assignment(const CostMatrix& cost) {
  const std::size_t n = std::max(cost.rows(), cost.cols());
  auto padded = [&](std::size_t r, std::size_t c) {
    return r < cost.rows() && c < cost.cols() ? cost.at(r, c) : 1.0;
  };
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  BruteForceAssignment best;
  best.cost = std::numeric_limits<double>::infinity();
  do {
    double total = 0;
    for (std::size_t r = 0; r < n; ++r) total += padded(r, perm[r]);
    if (total < best.cost) {
      best.cost = total;
      best.col_of_row = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  best.col_of_row.resize(cost.rows());
  for (int& c : best.col_of_row)
    if (c >= static_cast<int>(cost.cols())) c = -1;
  return best;
}

double padded_cost(const CostMatrix& cost, const std::vector<Assignment>& assignment) {
  const std::size_t n = std::max(cost.rows(), cost.cols());
  std::vector<int> col_of_row(n, -1);
  for (const auto& a : assignment) col_of_row[a.row] = static_cast<int>(a.col);
  double total = 0;
  for (std::size_t r = 0; r < n; ++r) total += col_of_row[r] < 0 ? 1.0 : cost.at(r, col_of_row[r]);
  return total;
}

}  // namespace xami::testing
