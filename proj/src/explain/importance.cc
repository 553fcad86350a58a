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
#include <fstream>
#include <numeric>

#include "slidex/error.h"
#include "slidex/explain.h"

namespace slidex::explain {

std::vector<std::string> FeatureImportance::RankedNames() const {
  std::vector<std::string> out;
  out.reserve(ranking.size());
  for (size_t f : ranking) out.push_back(feature_names[f]);
  return out;
}

int FeatureImportance::RankOf(size_t f) const {
  const auto it = std::find(ranking.begin(), ranking.end(), f);
  if (it == ranking.end()) throw Error(ErrorCode::kInvalidArgument, "feature not ranked");
  return static_cast<int>(it - ranking.begin()) + 1;
}

FeatureImportance RankFeatures(const ShapMatrix& shap) {
  if (shap.num_rows == 0 || shap.num_features() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "SHAP matrix is empty");
  }
  FeatureImportance out;
  out.feature_names = shap.feature_names;
  out.mean_abs.assign(shap.num_features(), 0.0);
  for (size_t r = 0; r < shap.num_rows; ++r) {
    for (size_t f = 0; f < shap.num_features(); ++f) out.mean_abs[f] += std::abs(shap.at(r, f));
  }
  for (double& v : out.mean_abs) v /= static_cast<double>(shap.num_rows);
  out.ranking.resize(shap.num_features());
  std::iota(out.ranking.begin(), out.ranking.end(), 0);
  std::stable_sort(out.ranking.begin(), out.ranking.end(),
                   [&](size_t a, size_t b) { return out.mean_abs[a] > out.mean_abs[b]; });
  return out;
}

std::vector<SummaryPoint> SummaryPoints(const ShapMatrix& shap,
                                        const dataset::DataTable& rows) {
  if (rows.num_rows() != shap.num_rows || rows.num_features() != shap.num_features()) {
    throw Error(ErrorCode::kLengthMismatch, "SHAP matrix and table shapes differ");
  }
  const FeatureImportance importance = RankFeatures(shap);
  std::vector<SummaryPoint> out;
  out.reserve(shap.num_rows * shap.num_features());
  for (size_t k = 0; k < importance.ranking.size(); ++k) {
    const size_t f = importance.ranking[k];
    const auto column = rows.Column(f);
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    const double range = *hi - *lo;
    for (size_t r = 0; r < shap.num_rows; ++r) {
      SummaryPoint p;
      p.row = r;
      p.feature = f;
      p.rank = static_cast<int>(k) + 1;
      p.shap = shap.at(r, f);
      p.normalized = range > 0.0 ? (column[r] - *lo) / range : 0.5;
      out.push_back(p);
    }
  }
  return out;
}

ReductionPlan SelectFeatures(const FeatureImportance& importance, int drop_count) {
  const int m = static_cast<int>(importance.ranking.size());
  if (drop_count < 0 || drop_count >= m) {
    throw Error(ErrorCode::kDropCountOutOfRange,
                "drop count " + std::to_string(drop_count) + " must be in [0, " +
                    std::to_string(m) + ")");
  }
  ReductionPlan plan;
  plan.drop_count = drop_count;
  std::vector<bool> dropped(static_cast<size_t>(m), false);
  for (int k = m - 1; k >= m - drop_count; --k) {
    const size_t f = importance.ranking[static_cast<size_t>(k)];
    dropped[f] = true;
    plan.dropped.push_back(importance.feature_names[f]);
  }
  for (size_t f = 0; f < dropped.size(); ++f) {
    if (!dropped[f]) plan.retained.push_back(importance.feature_names[f]);
  }
  return plan;
}

nlohmann::json ToJson(const FeatureImportance& importance) {
  nlohmann::json ranked = nlohmann::json::array();
  for (size_t k = 0; k < importance.ranking.size(); ++k) {
    const size_t f = importance.ranking[k];
    ranked.push_back({{"rank", k + 1},
                      {"feature", importance.feature_names[f]},
                      {"mean_abs_shap", importance.mean_abs[f]}});
  }
  return {{"ranking", std::move(ranked)}};
}

nlohmann::json ToJson(const ReductionPlan& plan) {
  return {{"drop_count", plan.drop_count},
          {"dropped", plan.dropped},
          {"retained", plan.retained}};
}

namespace {

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.precision(17);
  return out;
}

}  // namespace

void WriteShapCsv(const ShapMatrix& shap, const dataset::DataTable& rows,
                  const std::filesystem::path& path) {
  if (rows.num_rows() != shap.num_rows || rows.num_features() != shap.num_features()) {
    throw Error(ErrorCode::kLengthMismatch, "SHAP matrix and table shapes differ");
  }
  std::vector<double> lo(shap.num_features()), range(shap.num_features());
  for (size_t f = 0; f < shap.num_features(); ++f) {
    const auto column = rows.Column(f);
    const auto [mn, mx] = std::minmax_element(column.begin(), column.end());
    lo[f] = *mn;
    range[f] = *mx - *mn;
  }
  auto out = OpenForWrite(path);
  out << "row,feature,shap,normalized_value\n";
  for (size_t r = 0; r < shap.num_rows; ++r) {
    for (size_t f = 0; f < shap.num_features(); ++f) {
      const double normalized = range[f] > 0.0 ? (rows.at(r, f) - lo[f]) / range[f] : 0.5;
      out << r << ',' << shap.feature_names[f] << ',' << shap.at(r, f) << ','
          << normalized << '\n';
    }
  }
}

void WriteSummaryCsv(const std::vector<SummaryPoint>& points, const ShapMatrix& shap,
                     const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  out << "rank,feature,row,shap,normalized_value\n";
  for (const auto& p : points) {
    out << p.rank << ',' << shap.feature_names[p.feature] << ',' << p.row << ','
        << p.shap << ',' << p.normalized << '\n';
  }
}

}  // namespace slidex::explain
