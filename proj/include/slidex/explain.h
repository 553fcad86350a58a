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

#ifndef SLIDEX_EXPLAIN_H_
#define SLIDEX_EXPLAIN_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "slidex/dataset.h"
#include "slidex/gbt.h"

namespace slidex::explain {

// Per-row, per-feature Shapley values in margin (log-odds) space.
struct ShapMatrix {
  std::vector<std::string> feature_names;
  size_t num_rows = 0;
  std::vector<double> values;  // row-major, num_rows x feature_names.size()
  double expected_value = 0.0;

  size_t num_features() const { return feature_names.size(); }
  double at(size_t r, size_t f) const { return values[r * num_features() + f]; }
  std::span<const double> row(size_t r) const {
    return {values.data() + r * num_features(), num_features()};
  }
};

// base_margin + learning_rate * sum over trees of the cover-weighted mean
// leaf output.
double ExpectedValue(const gbt::GbtModel& model);

// Path-dependent TreeSHAP.
ShapMatrix TreeShap(const gbt::GbtModel& model, const dataset::DataTable& rows);
std::vector<double> TreeShapRow(const gbt::GbtModel& model, std::span<const double> row);

// Margin-space value of the model when only the features in `known` are
// observed: unknown splits average their children by cover.
double ConditionalExpectation(const gbt::GbtModel& model, std::span<const double> row,
                              const std::vector<bool>& known);

// Shapley values by direct summation over all 2^M feature subsets.
// Limited to M <= 20.
std::vector<double> BruteForceShap(const gbt::GbtModel& model, std::span<const double> row);

struct FeatureImportance {
  std::vector<std::string> feature_names;  // declaration order
  std::vector<double> mean_abs;            // declaration order
  std::vector<size_t> ranking;             // feature indices, most important first

  std::vector<std::string> RankedNames() const;
  // 1-based rank of feature `f`.
  int RankOf(size_t f) const;
};

// Mean |phi| per feature; equal means keep declaration order.
FeatureImportance RankFeatures(const ShapMatrix& shap);

struct SummaryPoint {
  size_t row = 0;
  size_t feature = 0;
  int rank = 0;
  double shap = 0.0;
  // Min-max scaled feature value; 0.5 for a constant column.
  double normalized = 0.0;
};

// One point per (row, feature), ordered by feature rank then row.
std::vector<SummaryPoint> SummaryPoints(const ShapMatrix& shap,
                                        const dataset::DataTable& rows);

struct ReductionPlan {
  int drop_count = 0;
  std::vector<std::string> dropped;   // least important first
  std::vector<std::string> retained;  // declaration order
};

ReductionPlan SelectFeatures(const FeatureImportance& importance, int drop_count);

nlohmann::json ToJson(const FeatureImportance& importance);
nlohmann::json ToJson(const ReductionPlan& plan);

// Long-format CSV: row, feature, shap, min-max normalized feature value.
void WriteShapCsv(const ShapMatrix& shap, const dataset::DataTable& rows,
                  const std::filesystem::path& path);
void WriteSummaryCsv(const std::vector<SummaryPoint>& points, const ShapMatrix& shap,
                     const std::filesystem::path& path);

}  // namespace slidex::explain

#endif  // SLIDEX_EXPLAIN_H_
