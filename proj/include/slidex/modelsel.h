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

#ifndef SLIDEX_MODELSEL_H_
#define SLIDEX_MODELSEL_H_

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "slidex/dataset.h"
#include "slidex/estimator.h"

namespace slidex::modelsel {

// Candidate values per parameter, in declaration order. Points are
// enumerated with the last parameter varying fastest.
class ParamGrid {
 public:
  using Axis = std::pair<std::string, std::vector<ParamValue>>;

  ParamGrid(ModelKind kind, std::vector<Axis> axes);
  static ParamGrid Default(ModelKind kind);

  ModelKind kind() const { return kind_; }
  const std::vector<Axis>& axes() const { return axes_; }
  size_t size() const;
  ParamPoint At(size_t index) const;

  nlohmann::json ToJson() const;

 private:
  ModelKind kind_;
  std::vector<Axis> axes_;
};

struct FoldAssignment {
  int k = 0;
  uint64_t seed = 0;
  std::vector<int> fold;  // fold index per row

  std::vector<size_t> TrainRows(int f) const;
  std::vector<size_t> ValidationRows(int f) const;
};

FoldAssignment StratifiedKFold(const dataset::DataTable& table, int k, uint64_t seed);

// Seed used to fit the model for one fold.
uint64_t FoldSeed(uint64_t seed, int fold);

struct CvResult {
  ParamPoint params;
  std::vector<double> fold_scores;
  // Weighted F1 on each fold's own training rows; filled on request.
  std::vector<double> train_scores;
  double mean = 0.0;
  double std = 0.0;
  std::string error;  // nonempty when the point failed; mean is then -inf

  bool failed() const { return !error.empty(); }
};

// Population mean and standard deviation of the fold scores.
void Summarize(CvResult& result);

nlohmann::json ToJson(const CvResult& r);

struct CvOptions {
  int k = 10;
  uint64_t seed = 15;
  bool train_scores = false;
  // Grid-search workers; 0 uses every hardware thread. Results do not
  // depend on this value.
  int threads = 0;
};

// Fit on k-1 folds, score weighted F1 on the held-out fold. Fit errors are
// rethrown with the fold index in the message.
CvResult CrossValidate(const dataset::DataTable& table, const Estimator& estimator,
                       const CvOptions& options);

struct SearchResult {
  ModelKind kind = ModelKind::kGbt;
  std::vector<CvResult> results;  // grid order
  size_t best = 0;

  const CvResult& winner() const { return results[best]; }
  nlohmann::json ToJson() const;
};

// Called once per grid point, in grid order, from whichever worker
// completes the prefix.
using SearchObserver = std::function<void(size_t index, const CvResult&)>;

// Exhaustive search. Points that differ only in the estimator's staged
// parameter share one fit per fold, truncated for the smaller values; the
// scores are identical to fitting every point separately.
SearchResult GridSearch(const dataset::DataTable& table, const ParamGrid& grid,
                        const CvOptions& options,
                        const SearchObserver& observer = nullptr);

}  // namespace slidex::modelsel

#endif  // SLIDEX_MODELSEL_H_
