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

#ifndef SLIDEX_ESTIMATOR_H_
#define SLIDEX_ESTIMATOR_H_

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "slidex/dataset.h"

namespace slidex::modelsel {

enum class ModelKind { kGbt, kKnn, kLogReg, kSvm, kAdaBoost };

std::string ModelKindName(ModelKind kind);
ModelKind ModelKindFromName(const std::string& name);

using ParamValue = std::variant<double, std::string>;
// One grid point: parameter values in declaration order.
using ParamPoint = std::vector<std::pair<std::string, ParamValue>>;

nlohmann::json ToJson(const ParamPoint& point);

class FittedModel {
 public:
  virtual ~FittedModel() = default;

  virtual ModelKind kind() const = 0;
  // Probability, vote share, or signed margin depending on the model.
  virtual std::vector<double> PredictScore(const dataset::DataTable& rows) const = 0;
  virtual std::vector<int> PredictLabel(const dataset::DataTable& rows) const = 0;
  virtual nlohmann::json ToJson() const = 0;

  // Round-by-round models can predict with only their first `stages`
  // rounds; NumStages() == 0 means the model is not staged.
  virtual size_t NumStages() const { return 0; }
  virtual std::vector<int> PredictLabelStaged(const dataset::DataTable& rows,
                                              size_t stages) const;
};

class Estimator {
 public:
  virtual ~Estimator() = default;

  virtual ModelKind kind() const = 0;
  virtual std::unique_ptr<FittedModel> Fit(const dataset::DataTable& train,
                                           uint64_t seed) const = 0;
  virtual ParamPoint params() const = 0;

  // Parameter such that a fit with a smaller value equals the same fit with
  // a larger value truncated to that many stages; empty if none.
  virtual std::string StagedParam() const { return {}; }
  // Copy of this estimator with the staged parameter replaced.
  virtual std::unique_ptr<Estimator> WithStages(int stages) const;
};

// Builds an estimator from a grid point; unspecified parameters keep their
// defaults. Unknown names or ill-typed values raise InvalidArgument.
std::unique_ptr<Estimator> MakeEstimator(ModelKind kind, const ParamPoint& point);

}  // namespace slidex::modelsel

#endif  // SLIDEX_ESTIMATOR_H_
