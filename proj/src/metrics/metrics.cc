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

#include "slidex/metrics.h"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "slidex/error.h"

namespace slidex::metrics {
namespace {

double SafeRatio(double num, double den, bool* degenerate) {
  if (den == 0.0) {
    *degenerate = true;
    return 0.0;
  }
  return num / den;
}

ClassMetrics MakeClassMetrics(long hit, long false_alarm, long miss) {
  ClassMetrics m;
  m.support = hit + miss;
  m.precision = SafeRatio(hit, hit + false_alarm, &m.degenerate);
  m.recall = SafeRatio(hit, hit + miss, &m.degenerate);
  m.f1 = SafeRatio(2.0 * m.precision * m.recall, m.precision + m.recall, &m.degenerate);
  return m;
}

nlohmann::json ToJson(const ClassMetrics& m) {
  return {{"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"support", m.support},
          {"degenerate", m.degenerate},
          {"precision_pct", Percent(m.precision)},
          {"recall_pct", Percent(m.recall)},
          {"f1_pct", Percent(m.f1)}};
}

}  // namespace

ConfusionMatrix Confusion(std::span<const int> labels,
                          std::span<const int> predictions) {
  if (labels.size() != predictions.size()) {
    throw Error(ErrorCode::kLengthMismatch, "labels and predictions differ in length");
  }
  ConfusionMatrix cm;
  for (size_t i = 0; i < labels.size(); ++i) {
    const bool actual = labels[i] == 1;
    const bool predicted = predictions[i] == 1;
    if (actual && predicted) ++cm.tp;
    if (!actual && predicted) ++cm.fp;
    if (!actual && !predicted) ++cm.tn;
    if (actual && !predicted) ++cm.fn;
  }
  return cm;
}

ClassReport MakeClassReport(const ConfusionMatrix& cm) {
  ClassReport r;
  bool unused = false;
  r.accuracy = SafeRatio(cm.tp + cm.tn, cm.total(), &unused);
  r.positive = MakeClassMetrics(cm.tp, cm.fp, cm.fn);
  r.negative = MakeClassMetrics(cm.tn, cm.fn, cm.fp);
  const double support = static_cast<double>(r.positive.support + r.negative.support);
  r.weighted_f1 = SafeRatio(r.positive.f1 * r.positive.support +
                                r.negative.f1 * r.negative.support,
                            support, &unused);
  return r;
}

double WeightedF1(std::span<const int> labels, std::span<const int> predictions) {
  return MakeClassReport(Confusion(labels, predictions)).weighted_f1;
}

RocCurve RocAuc(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) {
    throw Error(ErrorCode::kLengthMismatch, "labels and scores differ in length");
  }
  const long pos = std::count(labels.begin(), labels.end(), 1);
  const long neg = static_cast<long>(labels.size()) - pos;
  if (pos == 0 || neg == 0) {
    throw Error(ErrorCode::kSingleClassLabels, "ROC needs both classes");
  }
  std::vector<size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.points.push_back({0.0, 0.0});
  long tp = 0, fp = 0;
  // Concordant pairs plus half the tied pairs, accumulated per score group.
  double concordant = 0.0;
  for (size_t k = 0; k < order.size();) {
    size_t end = k;
    long group_pos = 0, group_neg = 0;
    while (end < order.size() && scores[order[end]] == scores[order[k]]) {
      (labels[order[end]] == 1 ? group_pos : group_neg) += 1;
      ++end;
    }
    // Positives in this group beat every negative with a lower score.
    concordant += static_cast<double>(group_pos) *
                  (static_cast<double>(neg - fp - group_neg) + 0.5 * group_neg);
    tp += group_pos;
    fp += group_neg;
    roc.points.push_back({static_cast<double>(fp) / neg, static_cast<double>(tp) / pos});
    k = end;
  }
  roc.auc = concordant / (static_cast<double>(pos) * static_cast<double>(neg));
  return roc;
}

double TrapezoidArea(const std::vector<RocPoint>& points) {
  double area = 0.0;
  for (size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

std::string Percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * fraction);
  return buf;
}

nlohmann::json ToJson(const ConfusionMatrix& cm) {
  return {{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}};
}

nlohmann::json ToJson(const ClassReport& r) {
  return {{"accuracy", r.accuracy},
          {"accuracy_pct", Percent(r.accuracy)},
          {"positive", ToJson(r.positive)},
          {"negative", ToJson(r.negative)},
          {"weighted_f1", r.weighted_f1},
          {"weighted_f1_pct", Percent(r.weighted_f1)}};
}

nlohmann::json ToJson(const RocCurve& roc) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : roc.points) pts.push_back({p.fpr, p.tpr});
  return {{"roc", std::move(pts)}, {"auc", roc.auc}};
}

nlohmann::json ToJson(const LearningCurve& lc) {
  return {{"fractions", lc.fractions},
          {"train_scores", lc.train_scores},
          {"cv_scores", lc.cv_scores}};
}

EvalReport Evaluate(std::span<const int> labels, std::span<const int> predictions,
                    std::span<const double> scores) {
  EvalReport e;
  e.confusion = Confusion(labels, predictions);
  e.report = MakeClassReport(e.confusion);
  e.roc = RocAuc(labels, scores);
  return e;
}

nlohmann::json ToJson(const EvalReport& e) {
  auto roc = ToJson(e.roc);
  return {{"confusion", ToJson(e.confusion)},
          {"class_report", ToJson(e.report)},
          {"roc", roc["roc"]},
          {"auc", e.roc.auc},
          {"auc_pct", Percent(e.roc.auc)}};
}

}  // namespace slidex::metrics
