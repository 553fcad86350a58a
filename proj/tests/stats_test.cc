/*
 * Copyright 2026 The Slidex Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>

#include "json.hpp"
#include "slidex/dataset.h"
#include "slidex/random.h"
#include "slidex/stats.h"
#include "test_util.h"

namespace slidex::stats {
namespace {

using testing::CodeOf;

nlohmann::json Fixture() {
  std::ifstream in(std::string(SLIDEX_FIXTURES_DIR) + "/shapiro_reference.json");
  return nlohmann::json::parse(in);
}

TEST(ShapiroWilk, MatchesReferenceImplementation) {
  const auto fixture = Fixture();
  ASSERT_EQ(fixture["cases"].size(), 10u);
  for (const auto& c : fixture["cases"]) {
    const auto data = c["data"].get<std::vector<double>>();
    const auto r = ShapiroWilk(data);
    EXPECT_NEAR(r.w_statistic, c["w"].get<double>(), 1e-4) << c["name"];
    EXPECT_NEAR(r.p_value, c["p_value"].get<double>(), 1e-4) << c["name"];
    EXPECT_EQ(r.n, data.size());
  }
}

TEST(ShapiroWilk, AffineInvariance) {
  Rng rng(8);
  for (size_t n : {3u, 7u, 20u, 150u, 1200u}) {
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = rng.Normal() * 2.0 + std::pow(rng.Uniform(), 3.0);
    for (size_t i = 0; i < n; ++i) y[i] = 3.7 * x[i] - 12.5;
    EXPECT_NEAR(ShapiroWilk(x).w_statistic, ShapiroWilk(y).w_statistic, 1e-10) << n;
  }
}

TEST(ShapiroWilk, PermutationInvariance) {
  Rng rng(9);
  std::vector<double> x(60);
  for (auto& v : x) v = rng.Normal();
  const double w = ShapiroWilk(x).w_statistic;
  rng.Shuffle(std::span<double>(x));
  EXPECT_DOUBLE_EQ(ShapiroWilk(x).w_statistic, w);
}

TEST(ShapiroWilk, RejectsDegenerateInput) {
  const std::vector<double> constant(10, 2.0);
  EXPECT_EQ(CodeOf([&] { ShapiroWilk(constant); }), ErrorCode::kConstantSample);
  const std::vector<double> two = {1.0, 2.0};
  EXPECT_EQ(CodeOf([&] { ShapiroWilk(two); }), ErrorCode::kSampleSizeOutOfRange);
  const std::vector<double> huge(5001, 1.0);
  EXPECT_EQ(CodeOf([&] { ShapiroWilk(huge); }), ErrorCode::kSampleSizeOutOfRange);
}

TEST(ShapiroWilk, SkewedSampleHasSmallerW) {
  Rng rng(10);
  std::vector<double> normal(300), skewed(300);
  for (size_t i = 0; i < 300; ++i) {
    normal[i] = rng.Normal();
    skewed[i] = std::exp(2.0 * rng.Normal());
  }
  const auto a = ShapiroWilk(normal), b = ShapiroWilk(skewed);
  EXPECT_GT(a.w_statistic, b.w_statistic);
  EXPECT_GT(a.p_value, 0.01);
  EXPECT_LT(b.p_value, 1e-6);
  EXPECT_LE(a.w_statistic, 1.0);
}

TEST(Contingency, CategoricalCounting) {
  const std::vector<double> f = {1, 1, 2, 2};
  const std::vector<int> y = {0, 0, 1, 1};
  const auto t = BuildContingency(f, y, 10, true);
  EXPECT_EQ(t.cells(), (std::vector<std::vector<long>>{{2, 0}, {0, 2}}));
}

TEST(Contingency, MedianSplitCounting) {
  const std::vector<double> f = {1, 2, 3, 4};
  const std::vector<int> y = {0, 1, 0, 1};
  const auto t = BuildContingency(f, y, 2, false);
  EXPECT_EQ(t.cells(), (std::vector<std::vector<long>>{{1, 1}, {1, 1}}));
}

TEST(Contingency, MatchesNestedLoopTally) {
  Rng rng(11);
  std::vector<double> f(200);
  std::vector<int> y(200);
  for (size_t i = 0; i < 200; ++i) {
    f[i] = rng.Normal();
    y[i] = rng.Uniform() < 0.5 ? 0 : 1;
  }
  const auto t = BuildContingency(f, y, 10, false);
  // Oracle: rank-based decile of each value, then a direct double loop.
  std::vector<std::vector<long>> expect(10, std::vector<long>(2, 0));
  for (size_t i = 0; i < 200; ++i) {
    long below = 0;
    for (size_t j = 0; j < 200; ++j) below += f[j] < f[i] ? 1 : 0;
    const size_t bin = static_cast<size_t>(10 * below / 200);
    for (int c = 0; c < 2; ++c) {
      if (y[i] == c) ++expect[bin][static_cast<size_t>(c)];
    }
  }
  EXPECT_EQ(t.cells(), expect);
  EXPECT_EQ(t.total(), 200);
}

TEST(ChiSquare, IndependentTableIsZero) {
  const auto r = ChiSquareTest(ContingencyTable({{15, 15}, {15, 15}}));
  EXPECT_DOUBLE_EQ(r.statistic, 0.0);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.dof, 1);
}

TEST(ChiSquare, HandComputedTwoByTwo) {
  const auto r = ChiSquareTest(ContingencyTable({{10, 20}, {20, 10}}));
  // Every cell deviates by 5 from an expected 15.
  EXPECT_NEAR(r.statistic, 4.0 * 25.0 / 15.0, 1e-12);
  EXPECT_EQ(r.dof, 1);
  // One degree of freedom: the tail is erfc(sqrt(x / 2)).
  EXPECT_NEAR(r.p_value, std::erfc(std::sqrt(r.statistic / 2.0)), 1e-12);
  EXPECT_NEAR(r.p_value, 0.00982, 1e-4);
}

TEST(ChiSquare, SurvivalClosedForms) {
  for (double x : {0.1, 1.0, 3.0, 10.0, 40.0}) {
    EXPECT_NEAR(ChiSquareSurvival(x, 2.0), std::exp(-x / 2.0), 1e-14);
    EXPECT_NEAR(ChiSquareSurvival(x, 1.0), std::erfc(std::sqrt(x / 2.0)), 1e-14);
  }
  EXPECT_DOUBLE_EQ(ChiSquareSurvival(0.0, 3.0), 1.0);
}

TEST(ChiSquare, PValueFallsAsAssociationGrows) {
  double last = 1.0;
  for (long d = 0; d <= 14; d += 2) {
    const auto r = ChiSquareTest(ContingencyTable({{15 + d, 15 - d}, {15 - d, 15 + d}}));
    EXPECT_LE(r.p_value, last);
    last = r.p_value;
  }
}

TEST(ChiSquare, RowOrderDoesNotMatter) {
  const auto a = ChiSquareTest(ContingencyTable({{3, 9}, {7, 2}, {5, 5}}));
  const auto b = ChiSquareTest(ContingencyTable({{5, 5}, {3, 9}, {7, 2}}));
  EXPECT_NEAR(a.statistic, b.statistic, 1e-12);
  EXPECT_EQ(a.dof, 2);
}

TEST(ChiSquare, ReportsPublishedStyleDof) {
  const auto r = ChiSquareTest(ContingencyTable({{10, 20}, {20, 10}}), 15);
  EXPECT_EQ(r.dof_paper, (60 - 1) * (15 - 1));
  EXPECT_EQ(r.dof, 1);
}

TEST(ChiSquare, ExtremeAssociationUnderflowsToZero) {
  const auto r = ChiSquareTest(ContingencyTable({{1000, 0}, {0, 1000}}));
  EXPECT_GE(r.p_value, 0.0);
  EXPECT_LT(r.p_value, 1e-300);
}

TEST(ChiSquare, RejectsMalformedTables) {
  EXPECT_EQ(CodeOf([] { ContingencyTable(std::vector<std::vector<long>>{}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { ContingencyTable({{1, 2}, {3}}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { ContingencyTable({{1, -2}}); }), ErrorCode::kInvalidArgument);
}

TEST(ChiSquare, EmptyLabelColumnHasZeroExpectedCells) {
  EXPECT_EQ(CodeOf([] { ChiSquareTest(ContingencyTable({{1, 0}, {2, 0}})); }),
            ErrorCode::kZeroExpectedCell);
}

TEST(ChiSquare, Json) {
  auto r = ChiSquareTest(ContingencyTable({{10, 20}, {20, 10}}));
  r.feature = "SLOPE";
  const auto j = ToJson(r);
  EXPECT_EQ(j["feature"], "SLOPE");
  EXPECT_EQ(j["dof"], 1);
}

}  // namespace
}  // namespace slidex::stats
