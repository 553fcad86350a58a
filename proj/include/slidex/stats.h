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

#ifndef SLIDEX_STATS_H_
#define SLIDEX_STATS_H_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace slidex::stats {

struct NormalityReport {
  std::string feature;
  double w_statistic = 0.0;
  double p_value = 0.0;
  size_t n = 0;
};

// Shapiro-Wilk W with Royston's (1992/1995) coefficient approximation and
// normalizing transform for the p-value. Valid for 3 <= n <= 5000.
NormalityReport ShapiroWilk(std::span<const double> sample);

// Observed counts, rows = feature level, columns = label value.
class ContingencyTable {
 public:
  explicit ContingencyTable(std::vector<std::vector<long>> observed);

  size_t rows() const { return observed_.size(); }
  size_t cols() const { return col_totals_.size(); }
  long observed(size_t r, size_t c) const { return observed_[r][c]; }
  long row_total(size_t r) const { return row_totals_[r]; }
  long col_total(size_t c) const { return col_totals_[c]; }
  long total() const { return total_; }
  double expected(size_t r, size_t c) const {
    return static_cast<double>(row_totals_[r]) * col_totals_[c] / total_;
  }
  const std::vector<std::vector<long>>& cells() const { return observed_; }

 private:
  std::vector<std::vector<long>> observed_;
  std::vector<long> row_totals_;
  std::vector<long> col_totals_;
  long total_ = 0;
};

// Categorical features count each distinct value as a level; continuous
// features are quantile-binned into `bins` levels. Empty levels are dropped.
ContingencyTable BuildContingency(std::span<const double> feature,
                                  std::span<const int> labels, int bins,
                                  bool categorical);

struct ChiSquareReport {
  std::string feature;
  double statistic = 0.0;
  long dof = 0;
  double p_value = 1.0;
  // (instances - 1) * (features - 1), reported alongside for comparison
  // with the published tables; not used for the p-value.
  long dof_paper = 0;
};

ChiSquareReport ChiSquareTest(const ContingencyTable& table,
                              long feature_count = 1);

// Upper tail of the chi-square distribution.
double ChiSquareSurvival(double statistic, double dof);

nlohmann::json ToJson(const NormalityReport& r);
nlohmann::json ToJson(const ChiSquareReport& r);

}  // namespace slidex::stats

#endif  // SLIDEX_STATS_H_
