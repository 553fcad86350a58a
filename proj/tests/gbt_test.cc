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
#include <limits>

#include "slidex/dataset.h"
#include "slidex/gbt.h"
#include "test_util.h"

namespace slidex::gbt {
namespace {

using testing::CodeOf;

double Accuracy(const std::vector<int>& pred, const dataset::DataTable& t) {
  size_t ok = 0;
  for (size_t r = 0; r < t.num_rows(); ++r) ok += pred[r] == t.label(r) ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(t.num_rows());
}

double StagedAccuracy(const GbtModel& m, const dataset::DataTable& t, size_t trees) {
  size_t ok = 0;
  for (size_t r = 0; r < t.num_rows(); ++r) {
    ok += (m.Margin(t.row(r), trees) > 0.0 ? 1 : 0) == t.label(r) ? 1 : 0;
  }
  return static_cast<double>(ok) / static_cast<double>(t.num_rows());
}

TEST(Similarity, Examples) {
  const std::vector<double> zero = {0, 0, 0}, covers = {0.25, 0.25, 0.25};
  EXPECT_DOUBLE_EQ(SimilarityScore(zero, covers, 1.0), 0.0);
  const std::vector<double> r = {0.5, -0.5, 0.5};
  EXPECT_NEAR(SimilarityScore(r, covers, 1.0), 0.25 / 1.75, 1e-15);
  EXPECT_NEAR(SimilarityScore(r, covers, 1.0), 0.142857, 1e-6);
  const std::vector<double> one = {0.3}, c = {0.21};
  EXPECT_NEAR(SimilarityScore(one, c, 0.0), 0.09 / 0.21, 1e-15);
  EXPECT_DOUBLE_EQ(SimilarityScore(1.5, 2.0, 1.0), 0.75);
}

TEST(Gain, Examples) {
  EXPECT_DOUBLE_EQ(Gain(0.5, 0.0, 0.5), 0.0);
  EXPECT_NEAR(Gain(0.9, 0.4, 0.5), 0.8, 1e-15);
}

TEST(Margin, EmptyAndSingleLeaf) {
  const std::vector<double> row = {1.0, 2.0};
  const GbtModel empty({}, -0.3, GbtParams{}, {"a", "b"});
  EXPECT_DOUBLE_EQ(empty.Margin(row), -0.3);
  TreeNode leaf;
  leaf.output = 2.0;
  leaf.cover = 1.0;
  GbtParams p;
  p.learning_rate = 0.25;
  const GbtModel one({Tree({leaf})}, 0.1, p, {"a", "b"});
  EXPECT_DOUBLE_EQ(one.Margin(row), 0.1 + 0.25 * 2.0);
  EXPECT_DOUBLE_EQ(one.Margin(row, 0), 0.1);
}

TEST(Fit, SeparableReachesPerfectTrainingAccuracyWithin50Rounds) {
  const auto t = testing::Separable(21, 200);
  GbtParams p;
  p.n_estimators = 50;
  p.max_depth = 3;
  const auto m = Fit(t, p);
  size_t first = 0;
  for (size_t k = 1; k <= 50; ++k) {
    if (StagedAccuracy(m, t, k) == 1.0) {
      first = k;
      break;
    }
  }
  EXPECT_GT(first, 0u);
  EXPECT_EQ(Accuracy(PredictLabel(m, t), t), 1.0);
}

TEST(Fit, TrainingLossNeverIncreases) {
  for (uint64_t seed : {1u, 2u, 3u}) {
    auto t = testing::Separable(seed, 150, 3, 0.0);
    GbtParams p;
    p.n_estimators = 120;
    p.learning_rate = 0.1;
    p.subsample = 1.0;
    const auto m = Fit(t, p);
    double last = LogLoss(m, t, 0);
    for (size_t k = 1; k <= m.trees().size(); ++k) {
      const double now = LogLoss(m, t, k);
      EXPECT_LE(now, last + 1e-12) << "round " << k;
      last = now;
    }
  }
}

TEST(Fit, XorNeedsDepthTwo) {
  const auto corners = testing::XorCorners();
  GbtParams p;
  p.n_estimators = 100;
  p.max_depth = 2;
  EXPECT_EQ(Accuracy(PredictLabel(Fit(corners, p), corners), corners), 1.0);
  p.max_depth = 1;
  EXPECT_LT(Accuracy(PredictLabel(Fit(corners, p), corners), corners), 1.0);

  // Depth-1 trees sum to f(x0) + g(x1), which misses at least one corner;
  // with equal corners that caps accuracy at 3/4.
  const auto even = testing::XorCorners({25, 25, 25, 25});
  EXPECT_LE(Accuracy(PredictLabel(Fit(even, p), even), even), 0.75);
}

TEST(Fit, FirstTreeMatchesNewtonLeafOracle) {
  const auto t = testing::Separable(5, 80, 3, 0.0);
  for (double lambda : {0.0, 1.0, 5.0}) {
    GbtParams p;
    p.n_estimators = 1;
    p.max_depth = 2;
    p.lambda = lambda;
    p.min_child_weight = 0.0;
    const auto m = Fit(t, p);
    const double prevalence = static_cast<double>(t.CountLabel(1)) / t.num_rows();
    EXPECT_NEAR(m.base_margin(), std::log(prevalence / (1 - prevalence)), 1e-12);
    const auto& tree = m.trees().front();
    // Route every row by hand, then recompute each leaf's value and cover.
    std::vector<double> g(tree.nodes().size(), 0.0), h(tree.nodes().size(), 0.0);
    for (size_t r = 0; r < t.num_rows(); ++r) {
      int id = 0;
      while (!tree.node(id).is_leaf()) {
        const auto& n = tree.node(id);
        id = t.at(r, static_cast<size_t>(n.feature)) < n.threshold ? n.left : n.right;
      }
      g[static_cast<size_t>(id)] += t.label(r) - prevalence;
      h[static_cast<size_t>(id)] += prevalence * (1 - prevalence);
    }
    for (size_t i = 0; i < tree.nodes().size(); ++i) {
      const auto& n = tree.nodes()[i];
      if (!n.is_leaf()) {
        EXPECT_NEAR(n.cover, tree.node(n.left).cover + tree.node(n.right).cover, 1e-12);
        continue;
      }
      EXPECT_NEAR(n.cover, h[i], 1e-9);
      EXPECT_NEAR(n.output, g[i] / (h[i] + lambda), 1e-9);
    }
    EXPECT_NEAR(tree.root().cover, t.num_rows() * prevalence * (1 - prevalence), 1e-9);
  }
}

TEST(Fit, CoversAreConsistentAcrossRounds) {
  const auto t = testing::Separable(6, 120, 4, 0.0);
  GbtParams p;
  p.n_estimators = 30;
  p.max_depth = 4;
  p.subsample = 0.7;
  const auto m = Fit(t, p);
  for (const auto& tree : m.trees()) {
    EXPECT_LE(tree.Depth(), 4);
    for (const auto& n : tree.nodes()) {
      EXPECT_GT(n.cover, 0.0);
      if (!n.is_leaf()) {
        EXPECT_NEAR(n.cover, tree.node(n.left).cover + tree.node(n.right).cover, 1e-12);
        EXPECT_GE(tree.node(n.left).cover, p.min_child_weight * (1 - 1e-9));
        EXPECT_GE(tree.node(n.right).cover, p.min_child_weight * (1 - 1e-9));
      }
    }
  }
}

TEST(Fit, InfiniteGammaGrowsStumpsOnly) {
  const auto t = testing::Separable(7, 100);
  GbtParams p;
  p.n_estimators = 5;
  p.gamma = std::numeric_limits<double>::infinity();
  const auto m = Fit(t, p);
  for (const auto& tree : m.trees()) EXPECT_EQ(tree.nodes().size(), 1u);
}

TEST(Fit, LargeGammaPrunesMoreThanSmall) {
  const auto t = testing::Separable(8, 150, 3, 0.0);
  GbtParams p;
  p.n_estimators = 20;
  p.max_depth = 4;
  auto count = [&](double gamma) {
    p.gamma = gamma;
    size_t nodes = 0;
    for (const auto& tree : Fit(t, p).trees()) nodes += tree.nodes().size();
    return nodes;
  };
  EXPECT_GE(count(0.0), count(0.5));
  EXPECT_GE(count(0.5), count(2.0));
}

TEST(Fit, PredictMarginMatchesManualSum) {
  const auto t = testing::Separable(9, 60, 3, 0.0);
  GbtParams p;
  p.n_estimators = 15;
  p.learning_rate = 0.3;
  const auto m = Fit(t, p);
  const auto margin = PredictMargin(m, t);
  const auto proba = PredictProba(m, t);
  for (size_t r = 0; r < t.num_rows(); ++r) {
    double sum = 0.0;
    for (const auto& tree : m.trees()) sum += tree.Predict(t.row(r));
    EXPECT_NEAR(margin[r], m.base_margin() + 0.3 * sum, 1e-12);
    EXPECT_NEAR(proba[r], 1.0 / (1.0 + std::exp(-margin[r])), 1e-12);
  }
}

TEST(Fit, DeterministicAndPrefixStable) {
  const auto t = testing::Separable(10, 120, 3, 0.0);
  GbtParams p;
  p.n_estimators = 40;
  p.subsample = 0.6;
  p.seed = 77;
  const auto a = Fit(t, p);
  EXPECT_EQ(a.ToJson().dump(), Fit(t, p).ToJson().dump());
  GbtParams shorter = p;
  shorter.n_estimators = 15;
  const auto b = Fit(t, shorter);
  for (size_t r = 0; r < t.num_rows(); ++r) {
    EXPECT_EQ(a.Margin(t.row(r), 15), b.Margin(t.row(r)));
  }
  GbtParams other = p;
  other.seed = 78;
  EXPECT_NE(a.ToJson().dump(), Fit(t, other).ToJson().dump());
}

TEST(Json, RoundTripIsByteIdentical) {
  const auto t = testing::Separable(11, 90, 3, 0.0);
  GbtParams p;
  p.n_estimators = 25;
  p.subsample = 0.8;
  const auto m = Fit(t, p);
  const auto back = GbtModel::FromJson(m.ToJson());
  EXPECT_EQ(back.ToJson().dump(), m.ToJson().dump());
  EXPECT_EQ(PredictMargin(back, t), PredictMargin(m, t));
  EXPECT_EQ(back.params(), m.params());
}

TEST(Fit, RejectsBadInput) {
  const auto t = testing::Table({{0.0}, {1.0}}, {1, 1});
  EXPECT_EQ(CodeOf([&] { Fit(t, GbtParams{}); }), ErrorCode::kSingleClassTrain);
  const auto ok = testing::Table({{0.0}, {1.0}}, {0, 1});
  GbtParams p;
  p.subsample = 0.0;
  EXPECT_EQ(CodeOf([&] { Fit(ok, p); }), ErrorCode::kInvalidArgument);
  p = GbtParams{};
  p.max_depth = 0;
  EXPECT_EQ(CodeOf([&] { Fit(ok, p); }), ErrorCode::kInvalidArgument);
  const auto model = Fit(ok, GbtParams{.n_estimators = 2});
  const auto wide = testing::Table({{0.0, 1.0}}, {0});
  EXPECT_EQ(CodeOf([&] { PredictMargin(model, wide); }), ErrorCode::kSchemaMismatch);
}

}  // namespace
}  // namespace slidex::gbt
