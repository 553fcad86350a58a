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

#include <cmath>

#include <Eigen/Dense>

#include "slidex/baselines.h"
#include "slidex/error.h"

namespace slidex::baselines {
namespace {

double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Logistic(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Column 0 is the intercept.
struct Problem {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  double inv_c;

  double Objective(const Eigen::VectorXd& w) const {
    const Eigen::VectorXd z = x * w;
    double loss = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) loss += Softplus(z[i]) - y[i] * z[i];
    return loss + 0.5 * inv_c * w.tail(w.size() - 1).squaredNorm();
  }

  Eigen::VectorXd Gradient(const Eigen::VectorXd& w, Eigen::VectorXd* p) const {
    const Eigen::VectorXd z = x * w;
    p->resize(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) (*p)[i] = Logistic(z[i]);
    Eigen::VectorXd g = x.transpose() * (*p - y);
    g.tail(g.size() - 1) += inv_c * w.tail(w.size() - 1);
    return g;
  }
};

}  // namespace

LogRegModel LogRegModel::Fit(const dataset::DataTable& train,
                             const LogRegParams& params) {
  if (!(params.C > 0.0)) throw Error(ErrorCode::kInvalidArgument, "C must be > 0");
  const size_t pos = train.CountLabel(1);
  if (pos == 0 || pos == train.num_rows()) {
    throw Error(ErrorCode::kSingleClassTrain, "training data holds a single class");
  }
  LogRegModel model;
  model.params_ = params;
  model.scaler_ = Standardizer::Fit(train);

  const auto n = static_cast<Eigen::Index>(train.num_rows());
  const auto m = static_cast<Eigen::Index>(train.num_features());
  const auto z = model.scaler_.ApplyAll(train);
  Problem prob{Eigen::MatrixXd(n, m + 1), Eigen::VectorXd(n), 1.0 / params.C};
  for (Eigen::Index i = 0; i < n; ++i) {
    prob.x(i, 0) = 1.0;
    for (Eigen::Index f = 0; f < m; ++f) {
      prob.x(i, f + 1) = z[static_cast<size_t>(i * m + f)];
    }
    prob.y[i] = train.label(static_cast<size_t>(i));
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(m + 1);
  Eigen::VectorXd p;
  Eigen::VectorXd g = prob.Gradient(w, &p);
  double objective = prob.Objective(w);
  int iter = 0;
  while (g.norm() > params.tol) {
    if (iter >= params.max_iter) {
      throw Error(ErrorCode::kNonConvergence,
                  "logistic regression did not converge in " +
                      std::to_string(params.max_iter) +
                      " iterations; gradient norm " + std::to_string(g.norm()));
    }
    ++iter;
    Eigen::MatrixXd h = prob.x.transpose() *
                        (p.array() * (1.0 - p.array())).matrix().asDiagonal() *
                        prob.x;
    for (Eigen::Index j = 1; j <= m; ++j) h(j, j) += prob.inv_c;
    const Eigen::VectorXd step = h.ldlt().solve(g);
    // Backtracking keeps every accepted step a strict decrease.
    double t = 1.0;
    const double slope = g.dot(step);
    Eigen::VectorXd candidate = w - step;
    double cand_obj = prob.Objective(candidate);
    while (cand_obj > objective - 1e-4 * t * slope && t > 1e-10) {
      t *= 0.5;
      candidate = w - t * step;
      cand_obj = prob.Objective(candidate);
    }
    if (cand_obj > objective) break;
    w = candidate;
    objective = cand_obj;
    g = prob.Gradient(w, &p);
  }
  if (g.norm() > params.tol) {
    throw Error(ErrorCode::kNonConvergence,
                "logistic regression line search stalled; gradient norm " +
                    std::to_string(g.norm()));
  }

  model.intercept_ = w[0];
  model.coef_.assign(w.data() + 1, w.data() + w.size());
  model.gradient_norm_ = g.norm();
  model.iterations_ = iter;
  return model;
}

std::vector<double> LogRegModel::PredictScore(const dataset::DataTable& rows) const {
  if (rows.num_features() != coef_.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "feature count differs from training data");
  }
  std::vector<double> out(rows.num_rows());
  for (size_t r = 0; r < rows.num_rows(); ++r) {
    const auto z = scaler_.Apply(rows.row(r));
    double s = intercept_;
    for (size_t f = 0; f < z.size(); ++f) s += coef_[f] * z[f];
    out[r] = Logistic(s);
  }
  return out;
}

std::vector<int> LogRegModel::PredictLabel(const dataset::DataTable& rows) const {
  const auto score = PredictScore(rows);
  std::vector<int> out(score.size());
  for (size_t i = 0; i < score.size(); ++i) out[i] = score[i] >= 0.5 ? 1 : 0;
  return out;
}

nlohmann::json LogRegModel::ToJson() const {
  return {{"kind", "logreg"},
          {"params", {{"C", params_.C}, {"penalty", "l2"}, {"solver", "newton"},
                      {"max_iter", params_.max_iter}, {"tol", params_.tol}}},
          {"standardizer", scaler_.ToJson()},
          {"intercept", intercept_},
          {"coefficients", coef_},
          {"gradient_norm", gradient_norm_},
          {"iterations", iterations_}};
}

}  // namespace slidex::baselines
