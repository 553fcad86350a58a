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

#include "slidex/learning_curve.h"

#include <algorithm>
#include <cmath>

#include "slidex/error.h"
#include "slidex/random.h"

namespace slidex::metrics {

dataset::DataTable StratifiedSubsample(const dataset::DataTable& table,
                                       double fraction, uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fraction must be in (0, 1]");
  }
  std::vector<size_t> keep;
  for (int cls : {0, 1}) {
    std::vector<size_t> rows;
    for (size_t r = 0; r < table.num_rows(); ++r) {
      if (table.label(r) == cls) rows.push_back(r);
    }
    Rng rng(DeriveSeed(seed, {0xc0e5, static_cast<uint64_t>(cls)}));
    rng.Shuffle(std::span<size_t>(rows));
    const auto count = static_cast<size_t>(std::llround(fraction * rows.size()));
    keep.insert(keep.end(), rows.begin(), rows.begin() + count);
  }
  std::sort(keep.begin(), keep.end());
  return table.SelectRows(keep);
}

std::vector<double> DefaultCurveFractions() { return {0.1, 0.325, 0.55, 0.775, 1.0}; }

LearningCurve ComputeLearningCurve(const dataset::DataTable& table,
                                   const modelsel::Estimator& estimator,
                                   const std::vector<double>& fractions,
                                   const modelsel::CvOptions& options) {
  if (fractions.empty()) throw Error(ErrorCode::kInvalidArgument, "no curve fractions");
  for (size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] > 0.0 && fractions[i] <= 1.0) ||
        (i > 0 && !(fractions[i] > fractions[i - 1]))) {
      throw Error(ErrorCode::kInvalidArgument,
                  "curve fractions must increase strictly within (0, 1]");
    }
  }
  modelsel::CvOptions cv = options;
  cv.train_scores = true;
  LearningCurve curve;
  for (double fraction : fractions) {
    const auto subset = StratifiedSubsample(table, fraction, options.seed);
    const auto result = modelsel::CrossValidate(subset, estimator, cv);
    double train = 0.0;
    for (double s : result.train_scores) train += s;
    curve.fractions.push_back(fraction);
    curve.train_scores.push_back(train / static_cast<double>(result.train_scores.size()));
    curve.cv_scores.push_back(result.mean);
  }
  return curve;
}

}  // namespace slidex::metrics
