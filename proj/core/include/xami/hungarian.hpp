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

#ifndef XAMI_HUNGARIAN_HPP_
#define XAMI_HUNGARIAN_HPP_

#include <cstddef>
#include <vector>

namespace xami {

/// Dense row-major matrix of assignment costs.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double& at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct Assignment {
  std::size_t row;
  std::size_t col;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Cost used for the dummy rows/columns that square up a rectangular matrix.
inline constexpr double kPaddingCost = 1.0;

/// Minimum-cost assignment (Kuhn-Munkres with potentials, O(n^3)).
///
/// Rectangular inputs are padded with kPaddingCost; only real (row, col)
/// pairs are returned, sorted by row. Among optimal assignments the one whose
/// column sequence is lexicographically smallest is chosen. Throws
/// InvalidArgument on non-finite entries.
std::vector<Assignment> kuhn_munkres(const CostMatrix& cost);

/// Sum of the assigned entries, accumulated in row order.
double assignment_cost(const CostMatrix& cost, const std::vector<Assignment>& assignment);

}  // namespace xami

#endif  // XAMI_HUNGARIAN_HPP_
