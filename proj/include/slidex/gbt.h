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

#ifndef SLIDEX_GBT_H_
#define SLIDEX_GBT_H_

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "slidex/dataset.h"

namespace slidex::gbt {

struct GbtParams {
  int max_depth = 3;
  int n_estimators = 1500;
  double learning_rate = 0.1;
  // Minimum gain for a split to be kept.
  double gamma = 0.0;
  double subsample = 1.0;
  // Leaf regularizer in the similarity and leaf-output denominators.
  double lambda = 1.0;
  // Minimum summed p(1-p) in each child of a split.
  double min_child_weight = 1.0;
  uint64_t seed = 0;

  void Validate() const;
  bool operator==(const GbtParams&) const = default;
};

// Flat node storage; children index into the owning tree's node vector.
// Rows with x[feature] < threshold descend left.
struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double output = 0.0;  // leaves only
  double cover = 0.0;

  bool is_leaf() const { return feature < 0; }
};

class Tree {
 public:
  Tree() = default;
  explicit Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(int i) const { return nodes_[static_cast<size_t>(i)]; }
  const TreeNode& root() const { return nodes_.front(); }

  // Raw leaf output reached by `row`.
  double Predict(std::span<const double> row) const;
  int Depth() const;

 private:
  std::vector<TreeNode> nodes_;
};

class GbtModel {
 public:
  GbtModel(std::vector<Tree> trees, double base_margin, GbtParams params,
           std::vector<std::string> feature_names);

  const std::vector<Tree>& trees() const { return trees_; }
  double base_margin() const { return base_margin_; }
  const GbtParams& params() const { return params_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  size_t num_features() const { return feature_names_.size(); }

  // base_margin + learning_rate * sum of the first `num_trees` tree outputs.
  double Margin(std::span<const double> row, size_t num_trees) const;
  double Margin(std::span<const double> row) const {
    return Margin(row, trees_.size());
  }

  nlohmann::json ToJson() const;
  static GbtModel FromJson(const nlohmann::json& j);

 private:
  std::vector<Tree> trees_;
  double base_margin_;
  GbtParams params_;
  std::vector<std::string> feature_names_;
};

// (sum residuals)^2 / (sum covers + lambda).
double SimilarityScore(std::span<const double> residuals,
                       std::span<const double> covers, double lambda);
double SimilarityScore(double residual_sum, double cover_sum, double lambda);

// left + right - root.
double Gain(double left, double right, double root);

double Sigmoid(double margin);

GbtModel Fit(const dataset::DataTable& train, const GbtParams& params);

std::vector<double> PredictMargin(const GbtModel& model,
                                  const dataset::DataTable& rows);
std::vector<double> PredictProba(const GbtModel& model,
                                 const dataset::DataTable& rows);
std::vector<int> PredictLabel(const GbtModel& model,
                              const dataset::DataTable& rows);

// Mean logistic loss of the first `num_trees` trees on `rows`.
double LogLoss(const GbtModel& model, const dataset::DataTable& rows,
               size_t num_trees);

nlohmann::json ParamsToJson(const GbtParams& p);
GbtParams ParamsFromJson(const nlohmann::json& j);

}  // namespace slidex::gbt

#endif  // SLIDEX_GBT_H_
