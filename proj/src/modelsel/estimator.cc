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

#include "slidex/estimator.h"

#include <cmath>

#include "slidex/baselines.h"
#include "slidex/error.h"
#include "slidex/gbt.h"

namespace slidex::modelsel {
namespace {

double AsNumber(const ParamValue& v, const std::string& name) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw Error(ErrorCode::kInvalidArgument, "parameter '" + name + "' must be numeric");
}

int AsInt(const ParamValue& v, const std::string& name) {
  const double d = AsNumber(v, name);
  if (d != std::floor(d)) {
    throw Error(ErrorCode::kInvalidArgument, "parameter '" + name + "' must be an integer");
  }
  return static_cast<int>(d);
}

std::string AsString(const ParamValue& v, const std::string& name) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw Error(ErrorCode::kInvalidArgument, "parameter '" + name + "' must be a string");
}

[[noreturn]] void Unknown(ModelKind kind, const std::string& name) {
  throw Error(ErrorCode::kInvalidArgument,
              "unknown " + ModelKindName(kind) + " parameter '" + name + "'");
}

std::vector<int> Threshold(const std::vector<double>& score, double cut) {
  std::vector<int> out(score.size());
  for (size_t i = 0; i < score.size(); ++i) out[i] = score[i] >= cut ? 1 : 0;
  return out;
}

// --- gbt ---

class GbtFitted : public FittedModel {
 public:
  explicit GbtFitted(gbt::GbtModel model) : model_(std::move(model)) {}
  ModelKind kind() const override { return ModelKind::kGbt; }
  std::vector<double> PredictScore(const dataset::DataTable& rows) const override {
    return gbt::PredictProba(model_, rows);
  }
  std::vector<int> PredictLabel(const dataset::DataTable& rows) const override {
    return gbt::PredictLabel(model_, rows);
  }
  nlohmann::json ToJson() const override { return model_.ToJson(); }
  size_t NumStages() const override { return model_.trees().size(); }
  std::vector<int> PredictLabelStaged(const dataset::DataTable& rows,
                                      size_t stages) const override {
    std::vector<int> out(rows.num_rows());
    for (size_t r = 0; r < rows.num_rows(); ++r) {
      out[r] = gbt::Sigmoid(model_.Margin(rows.row(r), stages)) >= 0.5 ? 1 : 0;
    }
    return out;
  }
  const gbt::GbtModel& model() const { return model_; }

 private:
  gbt::GbtModel model_;
};

class GbtEstimator : public Estimator {
 public:
  explicit GbtEstimator(gbt::GbtParams params) : params_(params) { params_.Validate(); }
  ModelKind kind() const override { return ModelKind::kGbt; }
  std::unique_ptr<FittedModel> Fit(const dataset::DataTable& train,
                                   uint64_t seed) const override {
    gbt::GbtParams p = params_;
    p.seed = seed;
    return std::make_unique<GbtFitted>(gbt::Fit(train, p));
  }
  ParamPoint params() const override {
    return {{"max_depth", static_cast<double>(params_.max_depth)},
            {"n_estimators", static_cast<double>(params_.n_estimators)},
            {"learning_rate", params_.learning_rate},
            {"gamma", params_.gamma},
            {"subsample", params_.subsample},
            {"lambda", params_.lambda},
            {"min_child_weight", params_.min_child_weight}};
  }
  std::string StagedParam() const override { return "n_estimators"; }
  std::unique_ptr<Estimator> WithStages(int stages) const override {
    gbt::GbtParams p = params_;
    p.n_estimators = stages;
    return std::make_unique<GbtEstimator>(p);
  }

 private:
  gbt::GbtParams params_;
};

// --- knn ---

class KnnFitted : public FittedModel {
 public:
  explicit KnnFitted(baselines::KnnModel model) : model_(std::move(model)) {}
  ModelKind kind() const override { return ModelKind::kKnn; }
  std::vector<double> PredictScore(const dataset::DataTable& rows) const override {
    return model_.PredictScore(rows);
  }
  std::vector<int> PredictLabel(const dataset::DataTable& rows) const override {
    return model_.PredictLabel(rows);
  }
  nlohmann::json ToJson() const override { return model_.ToJson(); }

 private:
  baselines::KnnModel model_;
};

class KnnEstimator : public Estimator {
 public:
  explicit KnnEstimator(baselines::KnnParams params) : params_(params) {}
  ModelKind kind() const override { return ModelKind::kKnn; }
  std::unique_ptr<FittedModel> Fit(const dataset::DataTable& train,
                                   uint64_t) const override {
    return std::make_unique<KnnFitted>(baselines::KnnModel::Fit(train, params_));
  }
  ParamPoint params() const override {
    return {{"n_neighbors", static_cast<double>(params_.n_neighbors)},
            {"p", static_cast<double>(params_.p)}};
  }

 private:
  baselines::KnnParams params_;
};

// --- logistic regression ---

class LogRegFitted : public FittedModel {
 public:
  explicit LogRegFitted(baselines::LogRegModel model) : model_(std::move(model)) {}
  ModelKind kind() const override { return ModelKind::kLogReg; }
  std::vector<double> PredictScore(const dataset::DataTable& rows) const override {
    return model_.PredictScore(rows);
  }
  std::vector<int> PredictLabel(const dataset::DataTable& rows) const override {
    return model_.PredictLabel(rows);
  }
  nlohmann::json ToJson() const override { return model_.ToJson(); }

 private:
  baselines::LogRegModel model_;
};

class LogRegEstimator : public Estimator {
 public:
  explicit LogRegEstimator(baselines::LogRegParams params) : params_(params) {}
  ModelKind kind() const override { return ModelKind::kLogReg; }
  std::unique_ptr<FittedModel> Fit(const dataset::DataTable& train,
                                   uint64_t) const override {
    return std::make_unique<LogRegFitted>(baselines::LogRegModel::Fit(train, params_));
  }
  ParamPoint params() const override {
    return {{"C", params_.C},
            {"max_iter", static_cast<double>(params_.max_iter)},
            {"tol", params_.tol}};
  }

 private:
  baselines::LogRegParams params_;
};

// --- svm ---

class SvmFitted : public FittedModel {
 public:
  explicit SvmFitted(baselines::SvmModel model) : model_(std::move(model)) {}
  ModelKind kind() const override { return ModelKind::kSvm; }
  std::vector<double> PredictScore(const dataset::DataTable& rows) const override {
    return model_.PredictScore(rows);
  }
  std::vector<int> PredictLabel(const dataset::DataTable& rows) const override {
    return model_.PredictLabel(rows);
  }
  nlohmann::json ToJson() const override { return model_.ToJson(); }

 private:
  baselines::SvmModel model_;
};

class SvmEstimator : public Estimator {
 public:
  explicit SvmEstimator(baselines::SvmParams params) : params_(params) {}
  ModelKind kind() const override { return ModelKind::kSvm; }
  std::unique_ptr<FittedModel> Fit(const dataset::DataTable& train,
                                   uint64_t) const override {
    return std::make_unique<SvmFitted>(baselines::SvmModel::Fit(train, params_));
  }
  ParamPoint params() const override {
    return {{"C", params_.C},
            {"kernel", baselines::KernelName(params_.kernel)},
            {"sigma", params_.sigma},
            {"smo_tol", params_.smo_tol}};
  }

 private:
  baselines::SvmParams params_;
};

// --- adaboost ---

class AdaBoostFitted : public FittedModel {
 public:
  explicit AdaBoostFitted(baselines::AdaBoostModel model) : model_(std::move(model)) {}
  ModelKind kind() const override { return ModelKind::kAdaBoost; }
  std::vector<double> PredictScore(const dataset::DataTable& rows) const override {
    return model_.PredictScore(rows);
  }
  std::vector<int> PredictLabel(const dataset::DataTable& rows) const override {
    return model_.PredictLabel(rows);
  }
  nlohmann::json ToJson() const override { return model_.ToJson(); }
  // Early termination leaves fewer stumps than requested; any prefix of the
  // requested rounds is still well defined.
  size_t NumStages() const override {
    return static_cast<size_t>(model_.params().n_estimators);
  }
  std::vector<int> PredictLabelStaged(const dataset::DataTable& rows,
                                      size_t stages) const override {
    return Threshold(model_.PredictScore(rows, stages), 0.0);
  }

 private:
  baselines::AdaBoostModel model_;
};

class AdaBoostEstimator : public Estimator {
 public:
  explicit AdaBoostEstimator(baselines::AdaBoostParams params) : params_(params) {}
  ModelKind kind() const override { return ModelKind::kAdaBoost; }
  std::unique_ptr<FittedModel> Fit(const dataset::DataTable& train,
                                   uint64_t) const override {
    return std::make_unique<AdaBoostFitted>(baselines::AdaBoostModel::Fit(train, params_));
  }
  ParamPoint params() const override {
    return {{"n_estimators", static_cast<double>(params_.n_estimators)},
            {"learning_rate", params_.learning_rate}};
  }
  std::string StagedParam() const override { return "n_estimators"; }
  std::unique_ptr<Estimator> WithStages(int stages) const override {
    baselines::AdaBoostParams p = params_;
    p.n_estimators = stages;
    return std::make_unique<AdaBoostEstimator>(p);
  }

 private:
  baselines::AdaBoostParams params_;
};

}  // namespace

std::string ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kGbt: return "gbt";
    case ModelKind::kKnn: return "knn";
    case ModelKind::kLogReg: return "logreg";
    case ModelKind::kSvm: return "svm";
    case ModelKind::kAdaBoost: return "adaboost";
  }
  return "unknown";
}

ModelKind ModelKindFromName(const std::string& name) {
  for (ModelKind k : {ModelKind::kGbt, ModelKind::kKnn, ModelKind::kLogReg,
                      ModelKind::kSvm, ModelKind::kAdaBoost}) {
    if (ModelKindName(k) == name) return k;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown model kind '" + name + "'");
}

nlohmann::json ToJson(const ParamPoint& point) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, value] : point) {
    if (const auto* d = std::get_if<double>(&value)) {
      if (std::isinf(*d)) {
        j[name] = "inf";
      } else {
        j[name] = *d;
      }
    } else {
      j[name] = std::get<std::string>(value);
    }
  }
  return j;
}

std::vector<int> FittedModel::PredictLabelStaged(const dataset::DataTable& rows,
                                                 size_t) const {
  return PredictLabel(rows);
}

std::unique_ptr<Estimator> Estimator::WithStages(int) const {
  throw Error(ErrorCode::kInvalidArgument,
              ModelKindName(kind()) + " has no staged parameter");
}

std::unique_ptr<Estimator> MakeEstimator(ModelKind kind, const ParamPoint& point) {
  switch (kind) {
    case ModelKind::kGbt: {
      gbt::GbtParams p;
      for (const auto& [name, v] : point) {
        if (name == "max_depth") p.max_depth = AsInt(v, name);
        else if (name == "n_estimators") p.n_estimators = AsInt(v, name);
        else if (name == "learning_rate") p.learning_rate = AsNumber(v, name);
        else if (name == "gamma") p.gamma = AsNumber(v, name);
        else if (name == "subsample") p.subsample = AsNumber(v, name);
        else if (name == "lambda") p.lambda = AsNumber(v, name);
        else if (name == "min_child_weight") p.min_child_weight = AsNumber(v, name);
        else Unknown(kind, name);
      }
      return std::make_unique<GbtEstimator>(p);
    }
    case ModelKind::kKnn: {
      baselines::KnnParams p;
      for (const auto& [name, v] : point) {
        if (name == "n_neighbors") p.n_neighbors = AsInt(v, name);
        else if (name == "p") p.p = AsInt(v, name);
        else Unknown(kind, name);
      }
      return std::make_unique<KnnEstimator>(p);
    }
    case ModelKind::kLogReg: {
      baselines::LogRegParams p;
      for (const auto& [name, v] : point) {
        if (name == "C") p.C = AsNumber(v, name);
        else if (name == "max_iter") p.max_iter = AsInt(v, name);
        else if (name == "tol") p.tol = AsNumber(v, name);
        else if (name == "penalty") {
          if (AsString(v, name) != "l2") {
            throw Error(ErrorCode::kInvalidArgument, "only the l2 penalty is supported");
          }
        } else if (name == "solver") {
          AsString(v, name);  // every solver name maps to damped Newton
        } else {
          Unknown(kind, name);
        }
      }
      return std::make_unique<LogRegEstimator>(p);
    }
    case ModelKind::kSvm: {
      baselines::SvmParams p;
      for (const auto& [name, v] : point) {
        if (name == "C") p.C = AsNumber(v, name);
        else if (name == "kernel") p.kernel = baselines::KernelFromName(AsString(v, name));
        else if (name == "sigma") p.sigma = AsNumber(v, name);
        else if (name == "smo_tol") p.smo_tol = AsNumber(v, name);
        else if (name == "max_passes") p.max_passes = AsInt(v, name);
        else Unknown(kind, name);
      }
      return std::make_unique<SvmEstimator>(p);
    }
    case ModelKind::kAdaBoost: {
      baselines::AdaBoostParams p;
      for (const auto& [name, v] : point) {
        if (name == "n_estimators") p.n_estimators = AsInt(v, name);
        else if (name == "learning_rate") p.learning_rate = AsNumber(v, name);
        else Unknown(kind, name);
      }
      return std::make_unique<AdaBoostEstimator>(p);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown model kind");
}

}  // namespace slidex::modelsel
