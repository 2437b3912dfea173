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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "xami/error.hpp"

namespace xami {
namespace {

std::vector<int> cols_of(const CostMatrix& m, const std::vector<Assignment>& a) {
  std::vector<int> out(m.rows(), -1);
  for (const auto& p : a) out[p.row] = static_cast<int>(p.col);
  return out;
}

TEST(KuhnMunkres, TwoByTwo) {
  const CostMatrix m(2, 2, {0.9, 0.1, 0.2, 0.8});
  const auto a = kuhn_munkres(m);
  EXPECT_EQ(a, (std::vector<Assignment>{{0, 1}, {1, 0}}));
  EXPECT_NEAR(assignment_cost(m, a), 0.3, 1e-15);
}

TEST(KuhnMunkres, DiagonalZeros) {
  CostMatrix m(5, 5, 0.7);
  for (std::size_t i = 0; i < 5; ++i) m.at(i, i) = 0.0;
  const auto a = kuhn_munkres(m);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(a[i], (Assignment{i, i}));
  EXPECT_EQ(assignment_cost(m, a), 0.0);
}

TEST(KuhnMunkres, EmptyAndRectangular) {
  EXPECT_TRUE(kuhn_munkres(CostMatrix(0, 0)).empty());
  EXPECT_TRUE(kuhn_munkres(CostMatrix(0, 3)).empty());
  // One column, three rows: the cheapest row wins it.
  const CostMatrix tall(3, 1, {0.6, 0.2, 0.9});
  EXPECT_EQ(kuhn_munkres(tall), (std::vector<Assignment>{{1, 0}}));
  const CostMatrix wide(1, 3, {0.6, 0.2, 0.9});
  EXPECT_EQ(kuhn_munkres(wide), (std::vector<Assignment>{{0, 1}}));
}

TEST(KuhnMunkres, RejectsNonFinite) {
  CostMatrix m(2, 2, 0.5);
  m.at(1, 0) = std::nan("");
  EXPECT_THROW(kuhn_munkres(m), InvalidArgument);
  m.at(1, 0) = INFINITY;
  EXPECT_THROW(kuhn_munkres(m), InvalidArgument);
}

TEST(KuhnMunkres, TiesBrokenLexicographically) {
  const CostMatrix all_equal(3, 3, 0.5);
  EXPECT_EQ(kuhn_munkres(all_equal), (std::vector<Assignment>{{0, 0}, {1, 1}, {2, 2}}));
  // Two optima of cost 0.2: {(0,0),(1,1)} and {(0,1),(1,0)}; the first is smaller.
  const CostMatrix two(2, 2, {0.1, 0.0, 0.2, 0.1});
  EXPECT_EQ(kuhn_munkres(two), (std::vector<Assignment>{{0, 0}, {1, 1}}));
}

TEST(KuhnMunkres, MatchesBruteForceOnRandomMatrices) {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t r = dim(rng), c = dim(rng);
    CostMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m.at(i, j) = u(rng);
    const auto a = kuhn_munkres(m);
    const auto oracle = testing::brute_force_assignment(m);
    ASSERT_EQ(testing::padded_cost(m, a), oracle.cost) << "trial " << trial;
  }
}

TEST(KuhnMunkres, LexicographicOptimumOnTiedMatrices) {
  std::mt19937_64 rng(103);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  std::uniform_int_distribution<int> level(0, 4);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t r = dim(rng), c = dim(rng);
    CostMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m.at(i, j) = level(rng) / 4.0;
    const auto a = kuhn_munkres(m);
    const auto oracle = testing::brute_force_assignment(m);
    ASSERT_EQ(testing::padded_cost(m, a), oracle.cost) << "trial " << trial;
    ASSERT_EQ(cols_of(m, a), oracle.col_of_row) << "trial " << trial;
  }
}

}  // namespace
}  // namespace xami
