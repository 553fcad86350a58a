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

#ifndef SLIDEX_METRICS_H_
#define SLIDEX_METRICS_H_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace slidex::metrics {

// Positive class = 1 (landslide susceptible).
struct ConfusionMatrix {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;

  long total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix Confusion(std::span<const int> labels,
                          std::span<const int> predictions);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long support = 0;
  // Set when a zero denominator forced a metric to 0.
  bool degenerate = false;
};

struct ClassReport {
  double accuracy = 0.0;
  ClassMetrics positive;
  ClassMetrics negative;
  double weighted_f1 = 0.0;
};

ClassReport MakeClassReport(const ConfusionMatrix& cm);

double WeightedF1(std::span<const int> labels, std::span<const int> predictions);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  // From (0, 0) to (1, 1), one point per distinct score threshold.
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// AUC is the exact Mann-Whitney statistic with ties counted as one half.
RocCurve RocAuc(std::span<const int> labels, std::span<const double> scores);

// Trapezoid area under a curve's points.
double TrapezoidArea(const std::vector<RocPoint>& points);

struct LearningCurve {
  std::vector<double> fractions;
  std::vector<double> train_scores;
  std::vector<double> cv_scores;
};

nlohmann::json ToJson(const ConfusionMatrix& cm);
nlohmann::json ToJson(const ClassReport& r);
nlohmann::json ToJson(const RocCurve& roc);
nlohmann::json ToJson(const LearningCurve& lc);

// Evaluation report for one model on one labelled set.
struct EvalReport {
  ConfusionMatrix confusion;
  ClassReport report;
  RocCurve roc;
};

EvalReport Evaluate(std::span<const int> labels, std::span<const int> predictions,
                    std::span<const double> scores);
nlohmann::json ToJson(const EvalReport& e);

// Percentage rendering with two decimals, e.g. 0.91538 -> "91.54".
std::string Percent(double fraction);

}  // namespace slidex::metrics

#endif  // SLIDEX_METRICS_H_
