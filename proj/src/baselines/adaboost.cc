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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "slidex/baselines.h"
#include "slidex/error.h"

namespace slidex::baselines {
namespace {

constexpr double kMinError = 1e-10;

struct StumpChoice {
  Stump stump;
  double error = std::numeric_limits<double>::infinity();
};

// Lowest weighted error over (feature, midpoint threshold, orientation);
// ties keep the earliest feature, threshold, and left = -1 first.
StumpChoice BestStump(const dataset::DataTable& data,
                      const std::vector<std::vector<size_t>>& sorted_rows,
                      std::span<const int> y, std::span<const double> w) {
  double pos_total = 0.0, neg_total = 0.0;
  for (size_t i = 0; i < y.size(); ++i) (y[i] == 1 ? pos_total : neg_total) += w[i];

  StumpChoice best;
  for (size_t f = 0; f < data.num_features(); ++f) {
    const auto& order = sorted_rows[f];
    double pos_left = 0.0, neg_left = 0.0;
    for (size_t k = 0; k + 1 < order.size(); ++k) {
      const size_t r = order[k];
      (y[r] == 1 ? pos_left : neg_left) += w[r];
      const double v = data.at(r, f);
      const double next = data.at(order[k + 1], f);
      if (!(next > v)) continue;
      double threshold = 0.5 * (v + next);
      if (!(threshold > v)) threshold = next;
      // left = -1: positives on the left and negatives on the right are wrong.
      const double err_neg_left = pos_left + (neg_total - neg_left);
      const double err_pos_left = neg_left + (pos_total - pos_left);
      if (err_neg_left < best.error) {
        best = {{static_cast<int>(f), threshold, -1, 0.0}, err_neg_left};
      }
      if (err_pos_left < best.error) {
        best = {{static_cast<int>(f), threshold, 1, 0.0}, err_pos_left};
      }
    }
  }
  return best;
}

}  // namespace

AdaBoostModel AdaBoostModel::Fit(const dataset::DataTable& train,
                                 const AdaBoostParams& params,
                                 const RoundObserver& observer) {
  if (params.n_estimators < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_estimators must be >= 1");
  }
  if (!(params.learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning_rate must be > 0");
  }
  const size_t n = train.num_rows();
  const size_t pos = train.CountLabel(1);
  if (pos == 0 || pos == n) {
    throw Error(ErrorCode::kSingleClassTrain, "training data holds a single class");
  }

  std::vector<std::vector<size_t>> sorted_rows(train.num_features());
  for (size_t f = 0; f < train.num_features(); ++f) {
    auto& order = sorted_rows[f];
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return train.at(a, f) < train.at(b, f);
    });
  }

  AdaBoostModel model;
  model.params_ = params;
  model.num_features_ = train.num_features();
  const std::vector<int>& y = train.labels();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));

  for (int round = 0; round < params.n_estimators; ++round) {
    StumpChoice choice = BestStump(train, sorted_rows, y, w);
    if (!std::isfinite(choice.error)) break;  // every feature constant
    const double raw_error = choice.error;
    if (raw_error >= 0.5) break;
    const double eps = std::clamp(raw_error, kMinError, 1.0 - kMinError);
    choice.stump.alpha = params.learning_rate * 0.5 * std::log((1.0 - eps) / eps);

    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const int target = y[i] == 1 ? 1 : -1;
      w[i] *= std::exp(-choice.stump.alpha * target * choice.stump.Predict(train.row(i)));
      total += w[i];
    }
    for (double& v : w) v /= total;
    model.stumps_.push_back(choice.stump);
    if (observer) observer(round, w);
    if (raw_error <= kMinError) break;
  }
  return model;
}

std::vector<double> AdaBoostModel::PredictScore(const dataset::DataTable& rows,
                                                size_t stages) const {
  if (rows.num_features() != num_features_) {
    throw Error(ErrorCode::kSchemaMismatch, "feature count differs from training data");
  }
  const size_t count = std::min(stages, stumps_.size());
  std::vector<double> out(rows.num_rows(), 0.0);
  for (size_t r = 0; r < rows.num_rows(); ++r) {
    const auto row = rows.row(r);
    for (size_t s = 0; s < count; ++s) out[r] += stumps_[s].alpha * stumps_[s].Predict(row);
  }
  return out;
}

std::vector<int> AdaBoostModel::PredictLabel(const dataset::DataTable& rows) const {
  const auto score = PredictScore(rows);
  std::vector<int> out(score.size());
  for (size_t i = 0; i < score.size(); ++i) out[i] = score[i] >= 0.0 ? 1 : 0;
  return out;
}

nlohmann::json AdaBoostModel::ToJson() const {
  nlohmann::json stumps = nlohmann::json::array();
  for (const auto& s : stumps_) {
    stumps.push_back({{"feature", s.feature}, {"threshold", s.threshold},
                      {"left", s.left}, {"alpha", s.alpha}});
  }
  return {{"kind", "adaboost"},
          {"params", {{"n_estimators", params_.n_estimators},
                      {"learning_rate", params_.learning_rate}}},
          {"stumps", std::move(stumps)}};
}

}  // namespace slidex::baselines
