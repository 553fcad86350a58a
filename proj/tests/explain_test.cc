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
#include <filesystem>
#include <fstream>
#include <numeric>

#include "random_ensemble.h"
#include "slidex/explain.h"
#include "test_util.h"

namespace slidex::explain {
namespace {

using gbt::GbtModel;
using gbt::GbtParams;
using gbt::Tree;
using gbt::TreeNode;
using testing::CodeOf;

TreeNode Leaf(double v, double cover) {
  TreeNode n;
  n.output = v;
  n.cover = cover;
  return n;
}

TreeNode Split(int feature, double threshold, int left, int right, double cover) {
  TreeNode n;
  n.feature = feature;
  n.threshold = threshold;
  n.left = left;
  n.right = right;
  n.cover = cover;
  return n;
}

GbtModel Wrap(std::vector<Tree> trees, double base, double lr, size_t m) {
  GbtParams p;
  p.learning_rate = lr;
  std::vector<std::string> names;
  for (size_t f = 0; f < m; ++f) names.push_back("f" + std::to_string(f));
  return GbtModel(std::move(trees), base, p, names);
}

TEST(TreeShap, ConstantModel) {
  const auto m = Wrap({Tree({Leaf(1.5, 4.0)})}, 0.2, 0.3, 3);
  const std::vector<double> row = {1, 2, 3};
  for (double phi : TreeShapRow(m, row)) EXPECT_DOUBLE_EQ(phi, 0.0);
  EXPECT_NEAR(ExpectedValue(m), 0.2 + 0.3 * 1.5, 1e-15);
}

TEST(TreeShap, SingleSplitHalvesTheDifference) {
  const double a = 2.0, b = -1.0, lr = 0.4;
  const auto m = Wrap({Tree({Split(0, 0.5, 1, 2, 2.0), Leaf(a, 1.0), Leaf(b, 1.0)})}, 0.0, lr, 2);
  const std::vector<double> left = {0.0, 9.0};
  const auto phi = TreeShapRow(m, left);
  EXPECT_NEAR(phi[0], lr * (a - b) / 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(phi[1], 0.0);
}

TEST(TreeShap, MatchesBruteForceOnRandomEnsembles) {
  Rng rng(2024);
  double worst = 0.0;
  for (int e = 0; e < 60; ++e) {
    const size_t m = 1 + rng.UniformInt(10);
    const auto model = testing::RandomEnsemble(rng, m, 1 + static_cast<int>(rng.UniformInt(4)),
                                               1 + rng.UniformInt(20));
    for (int i = 0; i < 5; ++i) {
      const auto x = testing::RandomInstance(rng, model);
      const auto fast = TreeShapRow(model, x);
      const auto slow = BruteForceShap(model, x);
      for (size_t f = 0; f < m; ++f) worst = std::max(worst, std::abs(fast[f] - slow[f]));
      const double sum = std::accumulate(fast.begin(), fast.end(), ExpectedValue(model));
      EXPECT_NEAR(sum, model.Margin(x), 1e-9);
    }
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(TreeShap, EfficiencyAgainstConditionalExpectation) {
  Rng rng(7);
  for (int e = 0; e < 30; ++e) {
    const size_t m = 1 + rng.UniformInt(10);
    const auto model = testing::RandomEnsemble(rng, m, 4, 10);
    const auto x = testing::RandomInstance(rng, model);
    const auto phi = TreeShapRow(model, x);
    const double full = ConditionalExpectation(model, x, std::vector<bool>(m, true));
    const double none = ConditionalExpectation(model, x, std::vector<bool>(m, false));
    EXPECT_NEAR(full, model.Margin(x), 1e-12);
    EXPECT_NEAR(none, ExpectedValue(model), 1e-12);
    EXPECT_NEAR(std::accumulate(phi.begin(), phi.end(), 0.0), full - none, 1e-12);
  }
}

TEST(TreeShap, DuplicatedFeaturesShareCredit) {
  // The same tree twice, once on each copy of the feature.
  auto tree_on = [](int f) {
    return Tree({Split(f, 0.0, 1, 2, 3.0), Leaf(-1.0, 2.0), Leaf(2.0, 1.0)});
  };
  const auto m = Wrap({tree_on(0), tree_on(1)}, 0.0, 0.5, 3);
  for (double v : {-0.7, 0.4}) {
    const std::vector<double> x = {v, v, 5.0};
    const auto phi = TreeShapRow(m, x);
    EXPECT_NEAR(phi[0], phi[1], 1e-15);
    EXPECT_DOUBLE_EQ(phi[2], 0.0);
  }
}

TEST(TreeShap, UnusedFeatureGetsZero) {
  Rng rng(5);
  auto model = testing::RandomEnsemble(rng, 4, 3, 8);
  // Extend the schema with a column no tree touches.
  auto names = model.feature_names();
  names.push_back("dummy");
  const GbtModel wide(model.trees(), model.base_margin(), model.params(), names);
  for (int i = 0; i < 10; ++i) {
    auto x = testing::RandomInstance(rng, wide);
    EXPECT_DOUBLE_EQ(TreeShapRow(wide, x)[4], 0.0);
  }
}

TEST(TreeShap, TrainedModelMatchesBruteForce) {
  const auto table = dataset::MakeSurrogate(3, 60);
  GbtParams p;
  p.n_estimators = 30;
  p.max_depth = 3;
  p.subsample = 0.8;
  const auto model = gbt::Fit(table, p);
  const auto shap = TreeShap(model, table);
  EXPECT_EQ(shap.num_rows, table.num_rows());
  EXPECT_DOUBLE_EQ(shap.expected_value, ExpectedValue(model));
  for (size_t r : {0u, 57u}) {
    const auto slow = BruteForceShap(model, table.row(r));
    for (size_t f = 0; f < table.num_features(); ++f) {
      EXPECT_NEAR(shap.at(r, f), slow[f], 1e-9);
    }
  }
}

TEST(TreeShap, Errors) {
  const auto bad = Wrap({Tree({Split(0, 0.5, 1, 2, 1.0), Leaf(1, 1.0), Leaf(2, 0.0)})}, 0, 1, 1);
  const std::vector<double> x = {0.9};
  EXPECT_EQ(CodeOf([&] { TreeShapRow(bad, x); }), ErrorCode::kNonPositiveCover);
  const auto ok = Wrap({Tree({Leaf(1, 1)})}, 0, 1, 2);
  EXPECT_EQ(CodeOf([&] { TreeShapRow(ok, x); }), ErrorCode::kSchemaMismatch);
  const auto wide = Wrap({Tree({Leaf(1, 1)})}, 0, 1, 21);
  const std::vector<double> row(21, 0.0);
  EXPECT_EQ(CodeOf([&] { BruteForceShap(wide, row); }), ErrorCode::kTooManyFeatures);
}

ShapMatrix Matrix(std::vector<std::string> names, size_t rows, std::vector<double> v) {
  ShapMatrix s;
  s.feature_names = std::move(names);
  s.num_rows = rows;
  s.values = std::move(v);
  return s;
}

TEST(Importance, RanksByMeanAbsoluteValue) {
  const auto s = Matrix({"a", "b", "c", "d"}, 2, {0.0, -3.0, 1.0, 1.0, 0.0, 1.0, -1.0, 1.0});
  const auto imp = RankFeatures(s);
  EXPECT_DOUBLE_EQ(imp.mean_abs[1], 2.0);
  // Equal means keep declaration order; the all-zero column comes last.
  EXPECT_EQ(imp.RankedNames(), (std::vector<std::string>{"b", "c", "d", "a"}));
  EXPECT_EQ(imp.RankOf(0), 4);
  EXPECT_EQ(imp.RankOf(1), 1);
}

TEST(Importance, SingleFeature) {
  const auto imp = RankFeatures(Matrix({"only"}, 3, {0.1, -0.2, 0.3}));
  EXPECT_EQ(imp.RankOf(0), 1);
}

TEST(Summary, CardinalityAndConstantColumns) {
  const auto one = testing::Table({{4.0}}, {1});
  const auto pts = SummaryPoints(Matrix({"x0"}, 1, {0.3}), one);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_DOUBLE_EQ(pts[0].normalized, 0.5);

  const auto t = testing::Table({{1.0, 7.0}, {3.0, 7.0}, {2.0, 7.0}}, {0, 1, 0});
  const auto s = Matrix({"x0", "x1"}, 3, {0.0, 0.5, 0.0, -0.5, 0.0, 0.9});
  const auto points = SummaryPoints(s, t);
  ASSERT_EQ(points.size(), 6u);
  // x1 ranks first, so its points come first, ordered by row.
  EXPECT_EQ(points[0].feature, 1u);
  EXPECT_EQ(points[0].row, 0u);
  EXPECT_EQ(points[2].row, 2u);
  for (size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(points[i].normalized, 0.5);
  EXPECT_DOUBLE_EQ(points[3].normalized, 0.0);
  EXPECT_DOUBLE_EQ(points[4].normalized, 1.0);
  EXPECT_DOUBLE_EQ(points[5].normalized, 0.5);
}

TEST(Reduction, Boundaries) {
  const auto imp = RankFeatures(Matrix({"a", "b", "c"}, 1, {0.2, 0.5, 0.1}));
  const auto none = SelectFeatures(imp, 0);
  EXPECT_TRUE(none.dropped.empty());
  EXPECT_EQ(none.retained, (std::vector<std::string>{"a", "b", "c"}));
  const auto most = SelectFeatures(imp, 2);
  EXPECT_EQ(most.retained, (std::vector<std::string>{"b"}));
  EXPECT_EQ(most.dropped, (std::vector<std::string>{"c", "a"}));
  EXPECT_EQ(CodeOf([&] { SelectFeatures(imp, 3); }), ErrorCode::kDropCountOutOfRange);
  EXPECT_EQ(CodeOf([&] { SelectFeatures(imp, -1); }), ErrorCode::kDropCountOutOfRange);
}

TEST(Export, SingleLeafModelWritesZeros) {
  const auto t = testing::Table({{1.0, 2.0}, {3.0, 4.0}}, {0, 1});
  GbtParams p;
  const GbtModel m({Tree({Leaf(0.7, 2.0)})}, 0.0, p, {"x0", "x1"});
  const auto shap = TreeShap(m, t);
  const auto path = std::filesystem::temp_directory_path() / "slidex_shap.csv";
  WriteShapCsv(shap, t, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "row,feature,shap,normalized_value");
  size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    const auto third = line.find(',', second + 1);
    EXPECT_EQ(std::stod(line.substr(second + 1, third - second - 1)), 0.0) << line;
  }
  EXPECT_EQ(rows, 4u);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace slidex::explain
