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

#ifndef SLIDEX_BASELINES_H_
#define SLIDEX_BASELINES_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "slidex/dataset.h"

namespace slidex::baselines {

// Per-feature z-scoring with training statistics (population variance).
// Zero-variance columns are centred but not scaled.
class Standardizer {
 public:
  Standardizer() = default;
  static Standardizer Fit(const dataset::DataTable& table);

  std::vector<double> Apply(std::span<const double> row) const;
  // Row-major standardized copy of the whole table.
  std::vector<double> ApplyAll(const dataset::DataTable& table) const;

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& scale() const { return scale_; }
  nlohmann::json ToJson() const;

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};

double MinkowskiDistance(std::span<const double> x, std::span<const double> y,
                         int p);

// --- k nearest neighbours -------------------------------------------------

struct KnnParams {
  int n_neighbors = 5;
  int p = 2;
};

class KnnModel {
 public:
  static KnnModel Fit(const dataset::DataTable& train, const KnnParams& params);

  // Fraction of positive labels among the k nearest training rows.
  std::vector<double> PredictScore(const dataset::DataTable& rows) const;
  // Majority vote; an even split goes to class 0.
  std::vector<int> PredictLabel(const dataset::DataTable& rows) const;
  nlohmann::json ToJson() const;

  const KnnParams& params() const { return params_; }

 private:
  KnnModel(KnnParams params, dataset::DataTable train)
      : params_(params), train_(std::move(train)) {}

  // Indices of the k nearest rows; distance ties go to the lower index.
  std::vector<size_t> Neighbors(std::span<const double> query) const;

  KnnParams params_;
  dataset::DataTable train_;
};

// --- logistic regression ---------------------------------------------------

struct LogRegParams {
  double C = 1.0;
  int max_iter = 100;
  double tol = 1e-6;
};

class LogRegModel {
 public:
  // Minimizes sum of logistic losses + ||w||^2 / (2C) over standardized
  // features with damped Newton steps from w = 0. The intercept is not
  // penalized.
  static LogRegModel Fit(const dataset::DataTable& train, const LogRegParams& params);

  std::vector<double> PredictScore(const dataset::DataTable& rows) const;
  std::vector<int> PredictLabel(const dataset::DataTable& rows) const;
  nlohmann::json ToJson() const;

  // Coefficients in standardized feature space.
  const std::vector<double>& coefficients() const { return coef_; }
  double intercept() const { return intercept_; }
  double gradient_norm() const { return gradient_norm_; }
  int iterations() const { return iterations_; }
  const Standardizer& standardizer() const { return scaler_; }
  const LogRegParams& params() const { return params_; }

 private:
  LogRegParams params_;
  Standardizer scaler_;
  std::vector<double> coef_;
  double intercept_ = 0.0;
  double gradient_norm_ = 0.0;
  int iterations_ = 0;
};

// --- support vector machine ------------------------------------------------

enum class Kernel { kLinear, kRbf };

struct SvmParams {
  double C = 1.0;
  Kernel kernel = Kernel::kRbf;
  // RBF width; <= 0 selects sqrt(M / 2), i.e. 1 / (2 sigma^2) = 1 / M.
  double sigma = 0.0;
  double smo_tol = 1e-3;
  long max_passes = 1000000;
};

std::string KernelName(Kernel k);
Kernel KernelFromName(const std::string& name);

class SvmModel {
 public:
  // SMO on the dual with maximal-violating-pair selection. Stops once the
  // KKT gap is <= smo_tol; NonConvergence after max_passes pair updates.
  static SvmModel Fit(const dataset::DataTable& train, const SvmParams& params);

  // Signed decision value sum(alpha_i y_i K(x_i, x)) + b.
  std::vector<double> PredictScore(const dataset::DataTable& rows) const;
  std::vector<int> PredictLabel(const dataset::DataTable& rows) const;
  nlohmann::json ToJson() const;

  double KernelValue(std::span<const double> a, std::span<const double> b) const;

  // Dual variables for every training row, with labels in {-1, +1}.
  const std::vector<double>& alphas() const { return alpha_; }
  const std::vector<int>& signed_labels() const { return y_; }
  double bias() const { return bias_; }
  double sigma() const { return sigma_; }
  double kkt_gap() const { return kkt_gap_; }
  long iterations() const { return iterations_; }
  const Standardizer& standardizer() const { return scaler_; }
  const SvmParams& params() const { return params_; }

 private:
  SvmParams params_;
  Standardizer scaler_;
  double sigma_ = 1.0;
  std::vector<double> alpha_;
  std::vector<int> y_;
  // Standardized rows with alpha > 0 and their alpha_i * y_i.
  std::vector<std::vector<double>> support_;
  std::vector<double> support_coef_;
  double bias_ = 0.0;
  double kkt_gap_ = 0.0;
  long iterations_ = 0;
};

// --- AdaBoost with decision stumps ----------------------------------------

struct AdaBoostParams {
  int n_estimators = 50;
  double learning_rate = 1.0;
};

// Outputs `left` (+1 or -1) when x[feature] < threshold, else -left.
struct Stump {
  int feature = 0;
  double threshold = 0.0;
  int left = 1;
  double alpha = 0.0;

  int Predict(std::span<const double> row) const {
    return row[static_cast<size_t>(feature)] < threshold ? left : -left;
  }
};

class AdaBoostModel {
 public:
  // Called after every reweighting with the round index and the
  // normalized sample weights.
  using RoundObserver = std::function<void(int, std::span<const double>)>;

  static AdaBoostModel Fit(const dataset::DataTable& train,
                           const AdaBoostParams& params,
                           const RoundObserver& observer = nullptr);

  // sum(alpha * stump(x)) over the first `stages` stumps.
  std::vector<double> PredictScore(const dataset::DataTable& rows,
                                   size_t stages) const;
  std::vector<double> PredictScore(const dataset::DataTable& rows) const {
    return PredictScore(rows, stumps_.size());
  }
  std::vector<int> PredictLabel(const dataset::DataTable& rows) const;
  nlohmann::json ToJson() const;

  const std::vector<Stump>& stumps() const { return stumps_; }
  const AdaBoostParams& params() const { return params_; }

 private:
  AdaBoostParams params_;
  std::vector<Stump> stumps_;
  size_t num_features_ = 0;
};

}  // namespace slidex::baselines

#endif  // SLIDEX_BASELINES_H_
