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
#include <vector>

#include "slidex/error.h"
#include "slidex/explain.h"

namespace slidex::explain {
namespace {

using gbt::Tree;
using gbt::TreeNode;

constexpr size_t kMaxBruteForceFeatures = 20;

struct PathElement {
  int feature = -1;
  double zero_fraction = 0.0;
  double one_fraction = 0.0;
  double weight = 0.0;
};

using Path = std::vector<PathElement>;

void ExtendPath(Path& path, int depth, double zero_fraction, double one_fraction,
                int feature) {
  path.resize(static_cast<size_t>(depth) + 1);
  path[depth] = {feature, zero_fraction, one_fraction, depth == 0 ? 1.0 : 0.0};
  for (int i = depth - 1; i >= 0; --i) {
    path[i + 1].weight += one_fraction * path[i].weight * (i + 1) / (depth + 1.0);
    path[i].weight = zero_fraction * path[i].weight * (depth - i) / (depth + 1.0);
  }
}

void UnwindPath(Path& path, int depth, int index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double next_one_portion = path[depth].weight;
  for (int i = depth - 1; i >= 0; --i) {
    if (one != 0.0) {
      const double tmp = path[i].weight;
      path[i].weight = next_one_portion * (depth + 1) / ((i + 1) * one);
      next_one_portion = tmp - path[i].weight * zero * (depth - i) / (depth + 1.0);
    } else {
      path[i].weight = path[i].weight * (depth + 1) / (zero * (depth - i));
    }
  }
  for (int i = index; i < depth; ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
  path.resize(static_cast<size_t>(depth));
}

// Total permutation weight of the path with element `index` removed.
double UnwoundPathSum(const Path& path, int depth, int index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double next_one_portion = path[depth].weight;
  double total = 0.0;
  for (int i = depth - 1; i >= 0; --i) {
    if (one != 0.0) {
      const double tmp = next_one_portion * (depth + 1) / ((i + 1) * one);
      total += tmp;
      next_one_portion = path[i].weight - tmp * zero * (depth - i) / (depth + 1.0);
    } else {
      total += path[i].weight / zero * (depth + 1) / (depth - i);
    }
  }
  return total;
}

class Recursion {
 public:
  Recursion(const Tree& tree, std::span<const double> x, std::vector<double>& phi,
            double scale)
      : tree_(tree), x_(x), phi_(phi), scale_(scale) {}

  void Run() { Recurse(0, 0, Path(), 1.0, 1.0, -1); }

 private:
  void Recurse(int node_id, int depth, Path path, double zero_fraction,
               double one_fraction, int feature) {
    ExtendPath(path, depth, zero_fraction, one_fraction, feature);
    const TreeNode& node = tree_.node(node_id);
    if (node.is_leaf()) {
      for (int i = 1; i <= depth; ++i) {
        const double w = UnwoundPathSum(path, depth, i);
        const PathElement& el = path[i];
        phi_[static_cast<size_t>(el.feature)] +=
            scale_ * w * (el.one_fraction - el.zero_fraction) * node.output;
      }
      return;
    }
    const bool go_left = x_[static_cast<size_t>(node.feature)] < node.threshold;
    const int hot = go_left ? node.left : node.right;
    const int cold = go_left ? node.right : node.left;
    const double hot_zero = tree_.node(hot).cover / node.cover;
    const double cold_zero = tree_.node(cold).cover / node.cover;

    double incoming_zero = 1.0, incoming_one = 1.0;
    int index = 0;
    while (index <= depth && path[index].feature != node.feature) ++index;
    if (index <= depth) {
      incoming_zero = path[index].zero_fraction;
      incoming_one = path[index].one_fraction;
      UnwindPath(path, depth, index);
      --depth;
    }
    Recurse(hot, depth + 1, path, hot_zero * incoming_zero, incoming_one, node.feature);
    Recurse(cold, depth + 1, std::move(path), cold_zero * incoming_zero, 0.0,
            node.feature);
  }

  const Tree& tree_;
  std::span<const double> x_;
  std::vector<double>& phi_;
  double scale_;
};

void CheckCovers(const gbt::GbtModel& model) {
  for (size_t t = 0; t < model.trees().size(); ++t) {
    for (const TreeNode& node : model.trees()[t].nodes()) {
      if (!(node.cover > 0.0)) {
        throw Error(ErrorCode::kNonPositiveCover,
                    "tree " + std::to_string(t) + " has a node with cover <= 0");
      }
    }
  }
}

void CheckRowWidth(const gbt::GbtModel& model, size_t width) {
  if (width != model.num_features()) {
    throw Error(ErrorCode::kSchemaMismatch, "row has " + std::to_string(width) +
                                                " features, model expects " +
                                                std::to_string(model.num_features()));
  }
}

double TreeExpectation(const Tree& tree, int node_id, std::span<const double> x,
                       const std::vector<bool>& known) {
  const TreeNode& node = tree.node(node_id);
  if (node.is_leaf()) return node.output;
  const auto f = static_cast<size_t>(node.feature);
  if (known[f]) {
    return TreeExpectation(tree, x[f] < node.threshold ? node.left : node.right, x, known);
  }
  const TreeNode& left = tree.node(node.left);
  const TreeNode& right = tree.node(node.right);
  return (left.cover * TreeExpectation(tree, node.left, x, known) +
          right.cover * TreeExpectation(tree, node.right, x, known)) /
         node.cover;
}

}  // namespace

double ExpectedValue(const gbt::GbtModel& model) {
  CheckCovers(model);
  const std::vector<bool> none(model.num_features(), false);
  const std::vector<double> x(model.num_features(), 0.0);
  return ConditionalExpectation(model, x, none);
}

double ConditionalExpectation(const gbt::GbtModel& model, std::span<const double> row,
                              const std::vector<bool>& known) {
  CheckRowWidth(model, row.size());
  double sum = 0.0;
  for (const Tree& tree : model.trees()) sum += TreeExpectation(tree, 0, row, known);
  return model.base_margin() + model.params().learning_rate * sum;
}

std::vector<double> TreeShapRow(const gbt::GbtModel& model, std::span<const double> row) {
  CheckRowWidth(model, row.size());
  CheckCovers(model);
  std::vector<double> phi(model.num_features(), 0.0);
  for (const Tree& tree : model.trees()) {
    Recursion(tree, row, phi, model.params().learning_rate).Run();
  }
  return phi;
}

ShapMatrix TreeShap(const gbt::GbtModel& model, const dataset::DataTable& rows) {
  if (rows.schema().names() != model.feature_names()) {
    throw Error(ErrorCode::kSchemaMismatch, "table features differ from the model's");
  }
  CheckCovers(model);
  ShapMatrix out;
  out.feature_names = model.feature_names();
  out.num_rows = rows.num_rows();
  out.expected_value = ExpectedValue(model);
  out.values.reserve(rows.num_rows() * model.num_features());
  for (size_t r = 0; r < rows.num_rows(); ++r) {
    const auto phi = TreeShapRow(model, rows.row(r));
    out.values.insert(out.values.end(), phi.begin(), phi.end());
  }
  return out;
}

std::vector<double> BruteForceShap(const gbt::GbtModel& model, std::span<const double> row) {
  const size_t m = model.num_features();
  if (m > kMaxBruteForceFeatures) {
    throw Error(ErrorCode::kTooManyFeatures,
                std::to_string(m) + " features exceed the subset-enumeration limit of " +
                    std::to_string(kMaxBruteForceFeatures));
  }
  CheckRowWidth(model, row.size());
  CheckCovers(model);

  const size_t subsets = size_t{1} << m;
  std::vector<double> value(subsets);
  std::vector<bool> known(m);
  for (size_t mask = 0; mask < subsets; ++mask) {
    for (size_t f = 0; f < m; ++f) known[f] = (mask >> f) & 1;
    value[mask] = ConditionalExpectation(model, row, known);
  }

  std::vector<double> factorial(m + 1, 1.0);
  for (size_t i = 1; i <= m; ++i) factorial[i] = factorial[i - 1] * static_cast<double>(i);
  // weight[s] = s! (m - s - 1)! / m!
  std::vector<double> weight(m, 0.0);
  for (size_t s = 0; s < m; ++s) weight[s] = factorial[s] * factorial[m - s - 1] / factorial[m];

  std::vector<double> phi(m, 0.0);
  for (size_t i = 0; i < m; ++i) {
    const size_t bit = size_t{1} << i;
    for (size_t mask = 0; mask < subsets; ++mask) {
      if (mask & bit) continue;
      const auto size = static_cast<size_t>(__builtin_popcountll(mask));
      phi[i] += weight[size] * (value[mask | bit] - value[mask]);
    }
  }
  return phi;
}

}  // namespace slidex::explain
