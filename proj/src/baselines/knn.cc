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
#include <numeric>

#include "slidex/baselines.h"
#include "slidex/error.h"

namespace slidex::baselines {

Standardizer Standardizer::Fit(const dataset::DataTable& table) {
  Standardizer s;
  const size_t m = table.num_features();
  const auto n = static_cast<double>(table.num_rows());
  s.mean_.assign(m, 0.0);
  s.scale_.assign(m, 1.0);
  if (table.num_rows() == 0) return s;
  for (size_t r = 0; r < table.num_rows(); ++r) {
    for (size_t f = 0; f < m; ++f) s.mean_[f] += table.at(r, f);
  }
  for (double& v : s.mean_) v /= n;
  std::vector<double> var(m, 0.0);
  for (size_t r = 0; r < table.num_rows(); ++r) {
    for (size_t f = 0; f < m; ++f) {
      const double d = table.at(r, f) - s.mean_[f];
      var[f] += d * d;
    }
  }
  for (size_t f = 0; f < m; ++f) {
    const double sd = std::sqrt(var[f] / n);
    s.scale_[f] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

std::vector<double> Standardizer::Apply(std::span<const double> row) const {
  std::vector<double> out(row.size());
  for (size_t f = 0; f < row.size(); ++f) out[f] = (row[f] - mean_[f]) / scale_[f];
  return out;
}

std::vector<double> Standardizer::ApplyAll(const dataset::DataTable& table) const {
  std::vector<double> out;
  out.reserve(table.values().size());
  for (size_t r = 0; r < table.num_rows(); ++r) {
    auto row = table.row(r);
    for (size_t f = 0; f < row.size(); ++f) {
      out.push_back((row[f] - mean_[f]) / scale_[f]);
    }
  }
  return out;
}

nlohmann::json Standardizer::ToJson() const {
  return {{"mean", mean_}, {"scale", scale_}};
}

double MinkowskiDistance(std::span<const double> x, std::span<const double> y,
                         int p) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "vectors differ in length");
  }
  if (p != 1 && p != 2) {
    throw Error(ErrorCode::kInvalidArgument, "Minkowski exponent must be 1 or 2");
  }
  double sum = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double d = std::abs(x[i] - y[i]);
    sum += p == 1 ? d : d * d;
  }
  return p == 1 ? sum : std::sqrt(sum);
}

KnnModel KnnModel::Fit(const dataset::DataTable& train, const KnnParams& params) {
  if (train.num_rows() == 0) {
    throw Error(ErrorCode::kEmptyTrain, "KNN needs at least one training row");
  }
  if (params.n_neighbors < 1 ||
      static_cast<size_t>(params.n_neighbors) > train.num_rows()) {
    throw Error(ErrorCode::kInvalidArgument,
                "n_neighbors must lie in [1, " + std::to_string(train.num_rows()) + "]");
  }
  if (params.p != 1 && params.p != 2) {
    throw Error(ErrorCode::kInvalidArgument, "Minkowski exponent must be 1 or 2");
  }
  return KnnModel(params, train);
}

std::vector<size_t> KnnModel::Neighbors(std::span<const double> query) const {
  const size_t n = train_.num_rows();
  std::vector<std::pair<double, size_t>> dist(n);
  for (size_t i = 0; i < n; ++i) {
    dist[i] = {MinkowskiDistance(query, train_.row(i), params_.p), i};
  }
  const auto k = static_cast<size_t>(params_.n_neighbors);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                    dist.end());
  std::vector<size_t> out(k);
  for (size_t i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

std::vector<double> KnnModel::PredictScore(const dataset::DataTable& rows) const {
  if (rows.num_features() != train_.num_features()) {
    throw Error(ErrorCode::kSchemaMismatch, "feature count differs from training data");
  }
  std::vector<double> out(rows.num_rows());
  for (size_t r = 0; r < rows.num_rows(); ++r) {
    const auto nn = Neighbors(rows.row(r));
    double positives = 0.0;
    for (size_t i : nn) positives += train_.label(i);
    out[r] = positives / static_cast<double>(nn.size());
  }
  return out;
}

std::vector<int> KnnModel::PredictLabel(const dataset::DataTable& rows) const {
  const auto score = PredictScore(rows);
  std::vector<int> out(score.size());
  for (size_t i = 0; i < score.size(); ++i) out[i] = score[i] > 0.5 ? 1 : 0;
  return out;
}

nlohmann::json KnnModel::ToJson() const {
  return {{"kind", "knn"},
          {"params", {{"n_neighbors", params_.n_neighbors}, {"p", params_.p}}},
          {"feature_names", train_.schema().names()},
          {"train_values", train_.values()},
          {"train_labels", train_.labels()}};
}

}  // namespace slidex::baselines
