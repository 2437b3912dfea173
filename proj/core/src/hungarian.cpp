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

#include "xami/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "xami/error.hpp"

namespace xami {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_)
    throw InvalidArgument("CostMatrix: " + std::to_string(values_.size()) + " values for " +
                          std::to_string(rows_) + "x" + std::to_string(cols_));
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Solution {
  std::vector<std::size_t> col_of_row;
  std::vector<double> u;  // row potentials
  std::vector<double> v;  // column potentials
};

// Shortest augmenting path Hungarian method on a square matrix.
Solution solve_square(const std::vector<double>& a, std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based internally; index 0 is the virtual source.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Solution s;
  s.col_of_row.assign(n, kNone);
  for (std::size_t j = 1; j <= n; ++j) s.col_of_row[p[j] - 1] = j - 1;
  s.u.assign(u.begin() + 1, u.end());
  s.v.assign(v.begin() + 1, v.end());
  return s;
}

// Lexicographically smallest perfect matching within the equality subgraph
// of an optimal dual solution. Every optimal assignment uses only tight
// edges, so this picks the lexicographically first optimum.
std::vector<std::size_t> lexicographic_optimum(const std::vector<double>& a, std::size_t n,
                                               const Solution& s) {
  double scale = 1.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  const double eps = 1e-9 * scale;
  std::vector<char> tight(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      tight[i * n + j] = (a[i * n + j] - s.u[i] - s.v[j] <= eps) || s.col_of_row[i] == j;

  std::vector<std::size_t> match = s.col_of_row;
  std::vector<std::size_t> owner(n);
  for (std::size_t i = 0; i < n; ++i) owner[match[i]] = i;
  std::vector<char> fixed_col(n, 0);

  std::vector<std::size_t> queue;
  std::vector<char> seen_row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < n; ++c) {
      if (!tight[i * n + c] || fixed_col[c]) continue;
      if (match[i] == c) break;
      // Re-seat owner(c) along an alternating path that ends on match[i],
      // the column row i gives up.
      const std::size_t target = match[i];
      const std::size_t start = owner[c];
      std::fill(seen_row.begin(), seen_row.end(), 0);
      queue.assign(1, start);
      seen_row[start] = 1;
      std::size_t found = kNone;
      std::vector<std::size_t> via_row(n, kNone);  // column -> row that reached it
      for (std::size_t q = 0; q < queue.size() && found == kNone; ++q) {
        const std::size_t r = queue[q];
        for (std::size_t y = 0; y < n; ++y) {
          if (!tight[r * n + y] || fixed_col[y] || y == c || y == match[r]) continue;
          if (via_row[y] != kNone) continue;
          via_row[y] = r;
          if (y == target) {
            found = y;
            break;
          }
          const std::size_t next = owner[y];
          if (!seen_row[next]) {
            seen_row[next] = 1;
            queue.push_back(next);
          }
        }
      }
      if (found == kNone) continue;
      // Walk back: each row on the path takes the column that reached it.
      std::size_t y = found;
      while (true) {
        const std::size_t r = via_row[y];
        const std::size_t prev = match[r];
        match[r] = y;
        owner[y] = r;
        if (r == start) break;
        y = prev;
      }
      match[i] = c;
      owner[c] = i;
      break;
    }
    fixed_col[match[i]] = 1;
  }
  return match;
}

double square_total(const std::vector<double>& a, std::size_t n, const std::vector<std::size_t>& m) {
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) t += a[i * n + m[i]];
  return t;
}

}  // namespace

std::vector<Assignment> kuhn_munkres(const CostMatrix& cost) {
  const std::size_t rows = cost.rows(), cols = cost.cols();
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (!std::isfinite(cost.at(r, c)))
        throw InvalidArgument("kuhn_munkres: non-finite cost at (" + std::to_string(r) + ", " +
                              std::to_string(c) + ")");
  if (rows == 0 || cols == 0) return {};

  const std::size_t n = std::max(rows, cols);
  std::vector<double> a(n * n, kPaddingCost);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) a[r * n + c] = cost.at(r, c);

  const Solution s = solve_square(a, n);
  std::vector<std::size_t> match = lexicographic_optimum(a, n, s);
  if (square_total(a, n, match) > square_total(a, n, s.col_of_row)) match = s.col_of_row;

  std::vector<Assignment> out;
  out.reserve(std::min(rows, cols));
  for (std::size_t r = 0; r < rows; ++r)
    if (match[r] < cols) out.push_back({r, match[r]});
  return out;
}

double assignment_cost(const CostMatrix& cost, const std::vector<Assignment>& assignment) {
  double t = 0.0;
  for (const auto& a : assignment) t += cost.at(a.row, a.col);
  return t;
}

}  // namespace xami
