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
#include <limits>

#include "slidex/baselines.h"
#include "slidex/error.h"

namespace slidex::baselines {
namespace {

constexpr double kMinCurvature = 1e-12;

}  // namespace

std::string KernelName(Kernel k) { return k == Kernel::kLinear ? "linear" : "rbf"; }

Kernel KernelFromName(const std::string& name) {
  if (name == "linear") return Kernel::kLinear;
  if (name == "rbf") return Kernel::kRbf;
  throw Error(ErrorCode::kInvalidArgument, "unknown kernel '" + name + "'");
}

double SvmModel::KernelValue(std::span<const double> a,
                             std::span<const double> b) const {
  double s = 0.0;
  if (params_.kernel == Kernel::kLinear) {
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::exp(-s / (2.0 * sigma_ * sigma_));
}

SvmModel SvmModel::Fit(const dataset::DataTable& train, const SvmParams& params) {
  if (!(params.C > 0.0)) throw Error(ErrorCode::kInvalidArgument, "C must be > 0");
  const size_t pos = train.CountLabel(1);
  if (pos == 0 || pos == train.num_rows()) {
    throw Error(ErrorCode::kSingleClassTrain, "training data holds a single class");
  }
  SvmModel model;
  model.params_ = params;
  model.scaler_ = Standardizer::Fit(train);
  const size_t n = train.num_rows();
  const size_t m = train.num_features();
  model.sigma_ = params.sigma > 0.0 ? params.sigma
                                    : std::sqrt(static_cast<double>(m) / 2.0);

  const auto z = model.scaler_.ApplyAll(train);
  auto row = [&](size_t i) { return std::span<const double>(z.data() + i * m, m); };
  std::vector<double> k(n * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      k[i * n + j] = k[j * n + i] = model.KernelValue(row(i), row(j));
    }
  }

  const double c = params.C;
  auto& alpha = model.alpha_;
  auto& y = model.y_;
  alpha.assign(n, 0.0);
  y.resize(n);
  for (size_t i = 0; i < n; ++i) y[i] = train.label(i) == 1 ? 1 : -1;
  // Gradient of 0.5 a'Qa - e'a with Q_ij = y_i y_j K_ij.
  std::vector<double> grad(n, -1.0);

  auto in_up = [&](size_t i) {
    return (y[i] == 1 && alpha[i] < c) || (y[i] == -1 && alpha[i] > 0.0);
  };
  auto in_low = [&](size_t i) {
    return (y[i] == 1 && alpha[i] > 0.0) || (y[i] == -1 && alpha[i] < c);
  };

  long iter = 0;
  double up_max = 0.0, low_min = 0.0;
  while (true) {
    size_t i_sel = n, j_sel = n;
    up_max = -std::numeric_limits<double>::infinity();
    low_min = std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > up_max) {
        up_max = v;
        i_sel = t;
      }
      if (in_low(t) && v < low_min) {
        low_min = v;
        j_sel = t;
      }
    }
    model.kkt_gap_ = up_max - low_min;
    if (i_sel == n || j_sel == n || model.kkt_gap_ <= params.smo_tol) break;
    if (iter >= params.max_passes) {
      throw Error(ErrorCode::kNonConvergence,
                  "SMO stopped after " + std::to_string(iter) +
                      " updates with KKT gap " + std::to_string(model.kkt_gap_));
    }
    ++iter;
    const size_t i = i_sel, j = j_sel;
    // Move alpha_i += y_i t, alpha_j -= y_j t; keeps sum(alpha y) fixed.
    const double eta = std::max(k[i * n + i] + k[j * n + j] - 2.0 * k[i * n + j],
                                kMinCurvature);
    double t = (up_max - low_min) / eta;
    const double cap_i = y[i] == 1 ? c - alpha[i] : alpha[i];
    const double cap_j = y[j] == 1 ? alpha[j] : c - alpha[j];
    const bool clip_i = cap_i <= t && cap_i <= cap_j;
    const bool clip_j = cap_j <= t && cap_j <= cap_i;
    t = std::min({t, cap_i, cap_j});
    const double old_i = alpha[i], old_j = alpha[j];
    alpha[i] = clip_i ? (y[i] == 1 ? c : 0.0) : alpha[i] + y[i] * t;
    alpha[j] = clip_j ? (y[j] == 1 ? 0.0 : c) : alpha[j] - y[j] * t;
    alpha[i] = std::clamp(alpha[i], 0.0, c);
    alpha[j] = std::clamp(alpha[j], 0.0, c);
    const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
    for (size_t r = 0; r < n; ++r) {
      grad[r] += y[r] * (y[i] * di * k[r * n + i] + y[j] * dj * k[r * n + j]);
    }
  }
  model.iterations_ = iter;

  // b from free vectors, midpoint of the KKT interval otherwise.
  double b_sum = 0.0;
  size_t free_count = 0;
  for (size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0 && alpha[t] < c) {
      b_sum += -y[t] * grad[t];
      ++free_count;
    }
  }
  model.bias_ = free_count > 0 ? b_sum / static_cast<double>(free_count)
                               : 0.5 * (up_max + low_min);

  for (size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      model.support_.emplace_back(row(t).begin(), row(t).end());
      model.support_coef_.push_back(alpha[t] * y[t]);
    }
  }
  return model;
}

std::vector<double> SvmModel::PredictScore(const dataset::DataTable& rows) const {
  if (rows.num_features() != scaler_.mean().size()) {
    throw Error(ErrorCode::kSchemaMismatch, "feature count differs from training data");
  }
  std::vector<double> out(rows.num_rows());
  for (size_t r = 0; r < rows.num_rows(); ++r) {
    const auto z = scaler_.Apply(rows.row(r));
    double s = bias_;
    for (size_t v = 0; v < support_.size(); ++v) {
      s += support_coef_[v] * KernelValue(support_[v], z);
    }
    out[r] = s;
  }
  return out;
}

std::vector<int> SvmModel::PredictLabel(const dataset::DataTable& rows) const {
  const auto score = PredictScore(rows);
  std::vector<int> out(score.size());
  for (size_t i = 0; i < score.size(); ++i) out[i] = score[i] >= 0.0 ? 1 : 0;
  return out;
}

nlohmann::json SvmModel::ToJson() const {
  return {{"kind", "svm"},
          {"params", {{"C", params_.C}, {"kernel", KernelName(params_.kernel)},
                      {"sigma", sigma_}, {"smo_tol", params_.smo_tol}}},
          {"standardizer", scaler_.ToJson()},
          {"bias", bias_},
          {"support_vectors", support_},
          {"support_coefficients", support_coef_}};
}

}  // namespace slidex::baselines
