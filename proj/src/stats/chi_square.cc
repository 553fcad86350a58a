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
#include <map>

#include <boost/math/special_functions/gamma.hpp>

#include "slidex/dataset.h"
#include "slidex/error.h"
#include "slidex/stats.h"

namespace slidex::stats {

ContingencyTable::ContingencyTable(std::vector<std::vector<long>> observed)
    : observed_(std::move(observed)) {
  if (observed_.empty() || observed_[0].empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty contingency table");
  }
  const size_t cols = observed_[0].size();
  col_totals_.assign(cols, 0);
  for (const auto& row : observed_) {
    if (row.size() != cols) {
      throw Error(ErrorCode::kInvalidArgument, "ragged contingency table");
    }
    long row_total = 0;
    for (size_t c = 0; c < cols; ++c) {
      if (row[c] < 0) {
        throw Error(ErrorCode::kInvalidArgument, "negative count");
      }
      row_total += row[c];
      col_totals_[c] += row[c];
    }
    row_totals_.push_back(row_total);
    total_ += row_total;
  }
  if (total_ <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "contingency table has no counts");
  }
}

ContingencyTable BuildContingency(std::span<const double> feature,
                                  std::span<const int> labels, int bins,
                                  bool categorical) {
  if (feature.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "feature and labels differ in length");
  }
  std::vector<double> level_of(feature.size());
  if (categorical) {
    level_of.assign(feature.begin(), feature.end());
  } else {
    const auto binned = dataset::QuantileBin(feature, bins);
    level_of.assign(binned.begin(), binned.end());
  }
  std::map<double, std::vector<long>> counts;
  for (size_t i = 0; i < feature.size(); ++i) {
    auto& row = counts[level_of[i]];
    row.resize(2, 0);
    row.at(static_cast<size_t>(labels[i])) += 1;
  }
  std::vector<std::vector<long>> observed;
  for (auto& [level, row] : counts) {
    if (row[0] + row[1] > 0) observed.push_back(row);
  }
  return ContingencyTable(std::move(observed));
}

double ChiSquareSurvival(double statistic, double dof) {
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

ChiSquareReport ChiSquareTest(const ContingencyTable& table, long feature_count) {
  double statistic = 0.0;
  for (size_t r = 0; r < table.rows(); ++r) {
    for (size_t c = 0; c < table.cols(); ++c) {
      const double e = table.expected(r, c);
      if (!(e > 0.0)) {
        throw Error(ErrorCode::kZeroExpectedCell,
                    "expected count is zero in cell (" + std::to_string(r) +
                        ", " + std::to_string(c) + ")");
      }
      const double d = table.observed(r, c) - e;
      statistic += d * d / e;
    }
  }
  ChiSquareReport report;
  report.statistic = statistic;
  report.dof = static_cast<long>((table.rows() - 1) * (table.cols() - 1));
  report.p_value = report.dof > 0
                       ? ChiSquareSurvival(statistic, static_cast<double>(report.dof))
                       : 1.0;
  report.dof_paper = (table.total() - 1) * (feature_count - 1);
  return report;
}

nlohmann::json ToJson(const NormalityReport& r) {
  return {{"feature", r.feature},
          {"w_statistic", r.w_statistic},
          {"p_value", r.p_value},
          {"n", r.n}};
}

nlohmann::json ToJson(const ChiSquareReport& r) {
  return {{"feature", r.feature},
          {"statistic", r.statistic},
          {"dof", r.dof},
          {"p_value", r.p_value},
          {"dof_paper", r.dof_paper}};
}

}  // namespace slidex::stats
