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

#include "slidex/learning_curve.h"
#include "slidex/metrics.h"
#include "slidex/modelsel.h"
#include "slidex/random.h"
#include "test_util.h"

namespace slidex::metrics {
namespace {

using testing::CodeOf;

TEST(Confusion, IdentityAndInversion) {
  const std::vector<int> y = {1, 1, 1, 0, 0};
  EXPECT_EQ(Confusion(y, y), (ConfusionMatrix{3, 0, 2, 0}));
  const std::vector<int> inv = {0, 0, 0, 1, 1};
  const auto cm = Confusion(y, inv);
  EXPECT_EQ(cm.tp, 0);
  EXPECT_EQ(cm.tn, 0);
  EXPECT_EQ(cm.fp, 2);
  EXPECT_EQ(cm.fn, 3);
  const std::vector<int> short_pred = {1};
  EXPECT_EQ(CodeOf([&] { Confusion(y, short_pred); }), ErrorCode::kLengthMismatch);
}

TEST(ClassReport, PublishedBoostingColumn) {
  const auto r = MakeClassReport(ConfusionMatrix{59, 5, 60, 6});
  EXPECT_EQ(Percent(r.accuracy), "91.54");
  EXPECT_EQ(Percent(r.positive.precision), "92.19");
  EXPECT_EQ(Percent(r.positive.recall), "90.77");
  EXPECT_EQ(Percent(r.positive.f1), "91.47");
  EXPECT_EQ(Percent(r.negative.f1), "91.60");
}

TEST(ClassReport, PublishedLogisticColumn) {
  const auto r = MakeClassReport(ConfusionMatrix{58, 3, 62, 7});
  EXPECT_EQ(Percent(r.accuracy), "92.31");
  EXPECT_EQ(Percent(r.negative.recall), "95.38");
}

TEST(ClassReport, PerfectMatrix) {
  const auto r = MakeClassReport(ConfusionMatrix{10, 0, 7, 0});
  for (double v : {r.accuracy, r.positive.precision, r.positive.recall, r.positive.f1,
                   r.negative.precision, r.negative.recall, r.negative.f1, r.weighted_f1}) {
    EXPECT_DOUBLE_EQ(v, 1.0);
  }
  EXPECT_FALSE(r.positive.degenerate);
}

TEST(ClassReport, MajorityPredictorOnBalancedData) {
  // Predict 1 everywhere: F1(P) = 2/3, F1(N) = 0, weighted 1/3.
  const auto r = MakeClassReport(ConfusionMatrix{5, 5, 0, 0});
  EXPECT_NEAR(r.positive.f1, 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(r.negative.f1, 0.0);
  EXPECT_TRUE(r.negative.degenerate);
  EXPECT_NEAR(r.weighted_f1, 1.0 / 3.0, 1e-15);
}

TEST(WeightedF1, MatchesSupportWeightedOracle) {
  Rng rng(3);
  std::vector<int> y(97), p(97);
  for (size_t i = 0; i < y.size(); ++i) {
    y[i] = rng.Uniform() < 0.3 ? 1 : 0;
    p[i] = rng.Uniform() < 0.7 ? y[i] : 1 - y[i];
  }
  double tp = 0, fp = 0, tn = 0, fn = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 1 && p[i] == 1) ++tp;
    if (y[i] == 0 && p[i] == 1) ++fp;
    if (y[i] == 0 && p[i] == 0) ++tn;
    if (y[i] == 1 && p[i] == 0) ++fn;
  }
  const double f1p = 2 * tp / (2 * tp + fp + fn), f1n = 2 * tn / (2 * tn + fn + fp);
  const double expect = ((tp + fn) * f1p + (tn + fp) * f1n) / y.size();
  EXPECT_NEAR(WeightedF1(y, p), expect, 1e-14);
}

TEST(Roc, Examples) {
  const std::vector<int> y = {0, 0, 1, 1};
  const std::vector<double> ranked = {0.1, 0.2, 0.8, 0.9};
  EXPECT_DOUBLE_EQ(RocAuc(y, ranked).auc, 1.0);
  const std::vector<double> flat = {0.3, 0.3, 0.3, 0.3};
  EXPECT_DOUBLE_EQ(RocAuc(y, flat).auc, 0.5);
  const std::vector<double> mixed = {0.1, 0.4, 0.35, 0.8};
  EXPECT_DOUBLE_EQ(RocAuc(y, mixed).auc, 0.75);
  const std::vector<int> one = {1, 1, 1, 1};
  EXPECT_EQ(CodeOf([&] { RocAuc(one, mixed); }), ErrorCode::kSingleClassLabels);
}

TEST(Roc, CurveAreaEqualsPairCount) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> y(60);
    std::vector<double> s(60);
    for (size_t i = 0; i < y.size(); ++i) {
      y[i] = i % 3 == 0 ? 1 : 0;
      // Coarse scores force plenty of ties.
      s[i] = std::floor(rng.Uniform() * 8) + (y[i] == 1 ? 1.5 : 0.0) * rng.Uniform();
    }
    double concordant = 0, pairs = 0;
    for (size_t i = 0; i < y.size(); ++i) {
      for (size_t j = 0; j < y.size(); ++j) {
        if (y[i] != 1 || y[j] != 0) continue;
        pairs += 1;
        concordant += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
    }
    const auto roc = RocAuc(y, s);
    EXPECT_NEAR(roc.auc, concordant / pairs, 1e-14);
    EXPECT_NEAR(TrapezoidArea(roc.points), roc.auc, 1e-12);
    EXPECT_DOUBLE_EQ(roc.points.front().fpr, 0.0);
    EXPECT_DOUBLE_EQ(roc.points.front().tpr, 0.0);
    EXPECT_DOUBLE_EQ(roc.points.back().fpr, 1.0);
    EXPECT_DOUBLE_EQ(roc.points.back().tpr, 1.0);
    for (size_t k = 1; k < roc.points.size(); ++k) {
      EXPECT_GE(roc.points[k].fpr, roc.points[k - 1].fpr);
      EXPECT_GE(roc.points[k].tpr, roc.points[k - 1].tpr);
    }
  }
}

TEST(Percent, Rendering) {
  EXPECT_EQ(Percent(0.91538), "91.54");
  EXPECT_EQ(Percent(0.9), "90.00");
  EXPECT_EQ(Percent(1.0), "100.00");
}

TEST(Evaluate, JsonCarriesRawAndPercent) {
  const std::vector<int> y = {0, 0, 1, 1};
  const std::vector<int> p = {0, 1, 1, 1};
  const std::vector<double> s = {0.1, 0.6, 0.7, 0.9};
  const auto j = ToJson(Evaluate(y, p, s));
  EXPECT_EQ(j["confusion"]["fp"], 1);
  EXPECT_DOUBLE_EQ(j["auc"].get<double>(), 1.0);
  EXPECT_EQ(j.dump().find("75.00") != std::string::npos, true) << j.dump();
}

TEST(Subsample, KeepsClassRatiosAndOrder) {
  const auto t = dataset::MakeSurrogate(2, 50);
  const auto half = StratifiedSubsample(t, 0.5, 9);
  EXPECT_EQ(half.CountLabel(0), 25u);
  EXPECT_EQ(half.CountLabel(1), 25u);
  const auto full = StratifiedSubsample(t, 1.0, 9);
  EXPECT_EQ(full.values(), t.values());
  EXPECT_EQ(StratifiedSubsample(t, 0.5, 9).values(), half.values());
  EXPECT_EQ(CodeOf([&] { StratifiedSubsample(t, 0.0, 9); }), ErrorCode::kInvalidArgument);
}

TEST(LearningCurve, EntriesEqualCrossValidationOfSubsamples) {
  const auto t = testing::Separable(12, 120, 3, 0.2);
  const auto est = modelsel::MakeEstimator(modelsel::ModelKind::kKnn, {{"n_neighbors", 3.0}});
  modelsel::CvOptions cv;
  cv.k = 3;
  cv.train_scores = true;
  const std::vector<double> fractions = {0.25, 0.5, 1.0};
  const auto lc = ComputeLearningCurve(t, *est, fractions, cv);
  ASSERT_EQ(lc.cv_scores.size(), 3u);
  for (size_t i = 0; i < fractions.size(); ++i) {
    const auto r = modelsel::CrossValidate(StratifiedSubsample(t, fractions[i], cv.seed), *est, cv);
    EXPECT_DOUBLE_EQ(lc.cv_scores[i], r.mean);
    EXPECT_GE(lc.train_scores[i], 0.0);
    EXPECT_LE(lc.train_scores[i], 1.0);
  }
  const std::vector<double> bad = {0.5, 0.5};
  EXPECT_EQ(CodeOf([&] { ComputeLearningCurve(t, *est, bad, cv); }),
            ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace slidex::metrics
