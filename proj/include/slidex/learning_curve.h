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

#ifndef SLIDEX_LEARNING_CURVE_H_
#define SLIDEX_LEARNING_CURVE_H_

#include <cstdint>
#include <vector>

#include "slidex/dataset.h"
#include "slidex/estimator.h"
#include "slidex/metrics.h"
#include "slidex/modelsel.h"

namespace slidex::metrics {

// Seeded per-class subsample keeping round(count * fraction) rows of each
// class. Kept rows stay in source order, so fraction 1 returns the table.
dataset::DataTable StratifiedSubsample(const dataset::DataTable& table,
                                       double fraction, uint64_t seed);

std::vector<double> DefaultCurveFractions();

// Cross-validated weighted F1 on growing stratified subsamples. Each entry
// is exactly CrossValidate on StratifiedSubsample(table, fraction, seed).
LearningCurve ComputeLearningCurve(const dataset::DataTable& table,
                                   const modelsel::Estimator& estimator,
                                   const std::vector<double>& fractions,
                                   const modelsel::CvOptions& options);

}  // namespace slidex::metrics

#endif  // SLIDEX_LEARNING_CURVE_H_
