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

#include "slidex/modelsel.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "slidex/error.h"
#include "slidex/metrics.h"
#include "slidex/random.h"

namespace slidex::modelsel {
namespace {

using dataset::DataTable;

constexpr uint64_t kFoldStream = 0xf01d;
constexpr uint64_t kFitStream = 0xf17;

ParamGrid::Axis Numbers(const std::string& name, std::vector<double> values) {
  return {name, std::vector<ParamValue>(values.begin(), values.end())};
}

ParamGrid::Axis Strings(const std::string& name, std::vector<std::string> values) {
  return {name, std::vector<ParamValue>(values.begin(), values.end())};
}

nlohmann::json ValueJson(const ParamValue& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    if (std::isinf(*d)) return "inf";
    return *d;
  }
  return std::get<std::string>(v);
}

struct FoldData {
  DataTable train;
  DataTable valid;
};

std::vector<FoldData> MakeFolds(const DataTable& table, const FoldAssignment& folds) {
  std::vector<FoldData> out;
  out.reserve(static_cast<size_t>(folds.k));
  for (int f = 0; f < folds.k; ++f) {
    const auto train_rows = folds.TrainRows(f);
    const auto valid_rows = folds.ValidationRows(f);
    out.push_back({table.SelectRows(train_rows), table.SelectRows(valid_rows)});
  }
  return out;
}

[[noreturn]] void RethrowWithFold(const Error& e, int fold) {
  throw Error(e.code(), "fold " + std::to_string(fold) + ": " + e.what());
}

CvResult RunCv(const std::vector<FoldData>& folds, const Estimator& estimator,
               uint64_t seed, bool train_scores) {
  CvResult result;
  result.params = estimator.params();
  for (size_t f = 0; f < folds.size(); ++f) {
    const int fold = static_cast<int>(f);
    try {
      const auto model = estimator.Fit(folds[f].train, FoldSeed(seed, fold));
      const auto pred = model->PredictLabel(folds[f].valid);
      result.fold_scores.push_back(metrics::WeightedF1(folds[f].valid.labels(), pred));
      if (train_scores) {
        const auto fit_pred = model->PredictLabel(folds[f].train);
        result.train_scores.push_back(
            metrics::WeightedF1(folds[f].train.labels(), fit_pred));
      }
    } catch (const Error& e) {
      RethrowWithFold(e, fold);
    }
  }
  Summarize(result);
  return result;
}

CvResult Failed(ParamPoint params, const std::string& message) {
  CvResult r;
  r.params = std::move(params);
  r.error = message;
  Summarize(r);
  return r;
}

// Evaluates one grid point on its own, recording failures instead of
// throwing.
CvResult EvaluatePoint(const std::vector<FoldData>& folds, ModelKind kind,
                       const ParamPoint& point, uint64_t seed, bool train_scores) {
  try {
    const auto estimator = MakeEstimator(kind, point);
    CvResult r = RunCv(folds, *estimator, seed, train_scores);
    r.params = point;
    return r;
  } catch (const std::exception& e) {
    return Failed(point, e.what());
  }
}

std::optional<int> StageValue(const ParamPoint& point, const std::string& staged) {
  for (const auto& [name, value] : point) {
    if (name != staged) continue;
    const auto* d = std::get_if<double>(&value);
    if (d == nullptr || *d < 1.0 || *d != std::floor(*d) || *d > 1e9) return std::nullopt;
    return static_cast<int>(*d);
  }
  return std::nullopt;
}

std::string GroupKey(const ParamPoint& point, const std::string& staged) {
  nlohmann::json key = nlohmann::json::array();
  for (const auto& [name, value] : point) {
    if (name == staged) continue;
    key.push_back({name, ValueJson(value)});
  }
  return key.dump();
}

size_t ResolveThreads(int requested) {
  if (requested > 0) return static_cast<size_t>(requested);
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

ParamGrid::ParamGrid(ModelKind kind, std::vector<Axis> axes)
    : kind_(kind), axes_(std::move(axes)) {
  if (axes_.empty()) throw Error(ErrorCode::kInvalidArgument, "parameter grid is empty");
  for (const auto& [name, values] : axes_) {
    if (values.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "no candidate values for '" + name + "'");
    }
  }
}

ParamGrid ParamGrid::Default(ModelKind kind) {
  switch (kind) {
    case ModelKind::kGbt:
      return ParamGrid(kind, {Numbers("max_depth", {2, 3, 5, 6, 8}),
                              Numbers("n_estimators", {500, 1500, 3000, 5000}),
                              Numbers("learning_rate", {0.01, 0.1, 0.05, 0.3, 0.5}),
                              Numbers("gamma", {0, 0.1, 0.5, 1, 2}),
                              Numbers("subsample", {0.5, 0.7, 0.8, 0.9, 1})});
    case ModelKind::kKnn:
      return ParamGrid(kind, {Numbers("n_neighbors", {3, 5, 7, 9, 11, 13}),
                              Numbers("p", {1, 2})});
    case ModelKind::kLogReg:
      return ParamGrid(kind, {Numbers("C", {0.001, 0.01, 0.1, 1, 10, 100})});
    case ModelKind::kSvm:
      return ParamGrid(kind, {Numbers("C", {0.01, 0.1, 1, 10, 100}),
                              Strings("kernel", {"linear", "rbf"})});
    case ModelKind::kAdaBoost:
      return ParamGrid(kind,
                       {Numbers("n_estimators", {10, 50, 100, 500, 1000, 1500, 3000}),
                        Numbers("learning_rate", {0.001, 0.01, 0.1, 0.15, 0.2, 0.3, 0.5, 1})});
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown model kind");
}

size_t ParamGrid::size() const {
  size_t n = 1;
  for (const auto& axis : axes_) n *= axis.second.size();
  return n;
}

ParamPoint ParamGrid::At(size_t index) const {
  if (index >= size()) throw Error(ErrorCode::kInvalidArgument, "grid index out of range");
  ParamPoint point(axes_.size());
  for (size_t a = axes_.size(); a-- > 0;) {
    const auto& [name, values] = axes_[a];
    point[a] = {name, values[index % values.size()]};
    index /= values.size();
  }
  return point;
}

nlohmann::json ParamGrid::ToJson() const {
  nlohmann::json axes = nlohmann::json::array();
  for (const auto& [name, values] : axes_) {
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& v : values) vs.push_back(ValueJson(v));
    axes.push_back({{"name", name}, {"values", std::move(vs)}});
  }
  return {{"kind", ModelKindName(kind_)}, {"axes", std::move(axes)}, {"size", size()}};
}

std::vector<size_t> FoldAssignment::TrainRows(int f) const {
  std::vector<size_t> rows;
  for (size_t r = 0; r < fold.size(); ++r) {
    if (fold[r] != f) rows.push_back(r);
  }
  return rows;
}

std::vector<size_t> FoldAssignment::ValidationRows(int f) const {
  std::vector<size_t> rows;
  for (size_t r = 0; r < fold.size(); ++r) {
    if (fold[r] == f) rows.push_back(r);
  }
  return rows;
}

FoldAssignment StratifiedKFold(const DataTable& table, int k, uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "k must be >= 2");
  FoldAssignment out;
  out.k = k;
  out.seed = seed;
  out.fold.assign(table.num_rows(), -1);
  // Each class continues the round robin where the previous one stopped so
  // that fold sizes, not just per-class counts, stay within one.
  size_t next = 0;
  for (int cls : {0, 1}) {
    std::vector<size_t> rows;
    for (size_t r = 0; r < table.num_rows(); ++r) {
      if (table.label(r) == cls) rows.push_back(r);
    }
    if (rows.size() < static_cast<size_t>(k)) {
      throw Error(ErrorCode::kClassSmallerThanK,
                  "class " + std::to_string(cls) + " has " + std::to_string(rows.size()) +
                      " rows, fewer than k = " + std::to_string(k));
    }
    Rng rng(DeriveSeed(seed, {kFoldStream, static_cast<uint64_t>(cls)}));
    rng.Shuffle(std::span<size_t>(rows));
    for (size_t row : rows) {
      out.fold[row] = static_cast<int>(next % static_cast<size_t>(k));
      ++next;
    }
  }
  return out;
}

uint64_t FoldSeed(uint64_t seed, int fold) {
  return DeriveSeed(seed, {kFitStream, static_cast<uint64_t>(fold)});
}

void Summarize(CvResult& result) {
  if (result.failed() || result.fold_scores.empty()) {
    result.mean = -std::numeric_limits<double>::infinity();
    result.std = 0.0;
    return;
  }
  const double n = static_cast<double>(result.fold_scores.size());
  double sum = 0.0;
  for (double s : result.fold_scores) sum += s;
  result.mean = sum / n;
  double ss = 0.0;
  for (double s : result.fold_scores) ss += (s - result.mean) * (s - result.mean);
  result.std = std::sqrt(ss / n);
}

nlohmann::json ToJson(const CvResult& r) {
  nlohmann::json j = {{"params", ToJson(r.params)}, {"fold_scores", r.fold_scores}};
  if (r.failed()) {
    j["mean"] = "-inf";
    j["std"] = 0.0;
    j["error"] = r.error;
  } else {
    j["mean"] = r.mean;
    j["std"] = r.std;
  }
  if (!r.train_scores.empty()) j["train_scores"] = r.train_scores;
  return j;
}

CvResult CrossValidate(const DataTable& table, const Estimator& estimator,
                       const CvOptions& options) {
  const auto folds = MakeFolds(table, StratifiedKFold(table, options.k, options.seed));
  return RunCv(folds, estimator, options.seed, options.train_scores);
}

nlohmann::json SearchResult::ToJson() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : results) rs.push_back(modelsel::ToJson(r));
  return {{"kind", ModelKindName(kind)},
          {"best_index", best},
          {"best", modelsel::ToJson(results[best])},
          {"results", std::move(rs)}};
}

SearchResult GridSearch(const DataTable& table, const ParamGrid& grid,
                        const CvOptions& options, const SearchObserver& observer) {
  const auto folds = MakeFolds(table, StratifiedKFold(table, options.k, options.seed));
  const size_t n = grid.size();

  SearchResult out;
  out.kind = grid.kind();
  std::vector<std::optional<CvResult>> results(n);
  size_t flushed = 0;
  auto flush = [&] {
    while (flushed < n && results[flushed].has_value()) {
      if (observer) observer(flushed, *results[flushed]);
      ++flushed;
    }
  };

  std::string staged;
  try {
    staged = MakeEstimator(grid.kind(), {})->StagedParam();
  } catch (const Error&) {
  }

  // Group points that differ only in the staged parameter, keyed by first
  // appearance so groups complete roughly in grid order.
  std::vector<std::vector<std::pair<size_t, int>>> groups;
  std::map<std::string, size_t> group_of;
  for (size_t i = 0; i < n; ++i) {
    const ParamPoint point = grid.At(i);
    const auto stages = staged.empty() ? std::nullopt : StageValue(point, staged);
    if (!stages) {
      groups.push_back({{i, -1}});
      continue;
    }
    const auto [it, inserted] = group_of.emplace(GroupKey(point, staged), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back({i, *stages});
  }

  // Evaluates one group; every member's result is independent of which
  // worker runs it.
  auto evaluate_group = [&](const std::vector<std::pair<size_t, int>>& group) {
    std::vector<CvResult> members(group.size());
    if (group.size() == 1) {
      members[0] = EvaluatePoint(folds, grid.kind(), grid.At(group[0].first), options.seed,
                                 options.train_scores);
      return members;
    }
    int max_stages = 0;
    for (const auto& [i, s] : group) max_stages = std::max(max_stages, s);
    for (size_t m = 0; m < group.size(); ++m) members[m].params = grid.At(group[m].first);
    try {
      ParamPoint full = grid.At(group.front().first);
      for (auto& [name, value] : full) {
        if (name == staged) value = static_cast<double>(max_stages);
      }
      const auto estimator = MakeEstimator(grid.kind(), full);
      for (size_t f = 0; f < folds.size(); ++f) {
        std::unique_ptr<FittedModel> model;
        try {
          model = estimator->Fit(folds[f].train, FoldSeed(options.seed, static_cast<int>(f)));
        } catch (const Error& e) {
          RethrowWithFold(e, static_cast<int>(f));
        }
        const auto& labels = folds[f].valid.labels();
        for (size_t m = 0; m < group.size(); ++m) {
          const auto pred = model->PredictLabelStaged(folds[f].valid,
                                                      static_cast<size_t>(group[m].second));
          members[m].fold_scores.push_back(metrics::WeightedF1(labels, pred));
          if (options.train_scores) {
            const auto fit_pred = model->PredictLabelStaged(
                folds[f].train, static_cast<size_t>(group[m].second));
            members[m].train_scores.push_back(
                metrics::WeightedF1(folds[f].train.labels(), fit_pred));
          }
        }
      }
      for (auto& r : members) Summarize(r);
    } catch (const std::exception& e) {
      for (auto& r : members) r = Failed(r.params, e.what());
    }
    return members;
  };

  std::mutex mu;
  std::atomic<size_t> next_group{0};
  auto worker = [&] {
    for (size_t g = next_group++; g < groups.size(); g = next_group++) {
      auto members = evaluate_group(groups[g]);
      std::lock_guard<std::mutex> lock(mu);
      for (size_t m = 0; m < members.size(); ++m) {
        results[groups[g][m].first] = std::move(members[m]);
      }
      flush();
    }
  };
  const size_t threads =
      std::max<size_t>(1, std::min(ResolveThreads(options.threads), groups.size()));
  std::vector<std::thread> pool;
  for (size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  out.results.reserve(n);
  for (auto& r : results) out.results.push_back(std::move(*r));
  for (size_t i = 1; i < n; ++i) {
    if (out.results[i].mean > out.results[out.best].mean) out.best = i;
  }
  return out;
}

}  // namespace slidex::modelsel
