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

#include "slidex/gbt.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "slidex/error.h"
#include "slidex/random.h"

namespace slidex::gbt {
namespace {

// Floor on per-row p(1-p) so saturated rows never yield a zero cover.
constexpr double kMinHessian = 1e-16;

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double gain = -std::numeric_limits<double>::infinity();
};

// SplitMix64 sequence with multiply-shift bounded draws. Cheap to seed,
// which matters because every boosting round starts a fresh stream.
class RowStream {
 public:
  explicit RowStream(uint64_t seed) : state_(seed) {}

  // Uniform in [0, bound) for 0 < bound < 2^32.
  uint64_t Below(uint32_t bound) {
    uint64_t product = (Next() >> 32) * bound;
    auto low = static_cast<uint32_t>(product);
    if (low < bound) {
      const uint32_t threshold = static_cast<uint32_t>(-bound) % bound;
      while (low < threshold) {
        product = (Next() >> 32) * bound;
        low = static_cast<uint32_t>(product);
      }
    }
    return product >> 32;
  }

 private:
  uint64_t Next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t state_;
};

// Per feature: (value, row) pairs in ascending value order.
using SortedColumns = std::vector<std::vector<std::pair<double, size_t>>>;


// Grows one tree level by level over the rows with position >= 0.
class TreeGrower {
 public:
  TreeGrower(const dataset::DataTable& data, const SortedColumns& sorted_rows,
             const GbtParams& params, std::span<const double> grad,
             std::span<const double> hess, std::vector<int>& position)
      : data_(data),
        sorted_rows_(sorted_rows),
        params_(params),
        grad_(grad),
        hess_(hess),
        position_(position) {}

  Tree Grow() {
    nodes_.assign(1, TreeNode{});
    sums_.assign(1, {0.0, 0.0});
    for (size_t i = 0; i < position_.size(); ++i) {
      if (position_[i] == 0) {
        sums_[0].first += grad_[i];
        sums_[0].second += hess_[i];
      }
    }
    std::vector<int> frontier = {0};
    for (int depth = 0; depth < params_.max_depth && !frontier.empty(); ++depth) {
      frontier = ExpandLevel(frontier);
    }
    for (size_t id = 0; id < nodes_.size(); ++id) {
      if (nodes_[id].is_leaf()) {
        nodes_[id].output =
            sums_[id].first / (sums_[id].second + params_.lambda);
        nodes_[id].cover = sums_[id].second;
      }
    }
    FixCover(0);
    return Tree(std::move(nodes_));
  }

 private:
  struct ScanState {
    double gl = 0.0;
    double hl = 0.0;
    double prev = 0.0;
    bool seen = false;
  };

  // Split cover is the exact sum of its children.
  double FixCover(int id) {
    auto& node = nodes_[static_cast<size_t>(id)];
    if (node.is_leaf()) return node.cover;
    const int left = node.left, right = node.right;
    const double cover = FixCover(left) + FixCover(right);
    nodes_[static_cast<size_t>(id)].cover = cover;
    return cover;
  }

  std::vector<int> ExpandLevel(const std::vector<int>& frontier) {
    std::vector<int> slot_of(nodes_.size(), -1);
    // A node lighter than two minimal children cannot be split; the slack
    // keeps the shortcut conservative under rounding.
    const double min_split_cover = 2.0 * params_.min_child_weight * (1.0 - 1e-9);
    bool any_open = false;
    for (size_t s = 0; s < frontier.size(); ++s) {
      const size_t id = static_cast<size_t>(frontier[s]);
      if (params_.min_child_weight > 0.0 && sums_[id].second < min_split_cover) continue;
      slot_of[id] = static_cast<int>(s);
      any_open = true;
    }
    if (!any_open) return {};
    std::vector<SplitCandidate> best(frontier.size());
    std::vector<double> root_score(frontier.size());
    for (size_t s = 0; s < frontier.size(); ++s) {
      const auto& [g, h] = sums_[static_cast<size_t>(frontier[s])];
      root_score[s] = SimilarityScore(g, h, params_.lambda);
    }

    // One pass per feature: each open node keeps running left sums, and a
    // candidate is scored whenever its next row has a larger value.
    const size_t num_features = data_.num_features();
    const double lambda = params_.lambda;
    const double mcw = params_.min_child_weight;
    if (frontier.size() == 1 && frontier[0] == 0) {
      for (size_t f = 0; f < num_features; ++f) {
        ScanRoot(f, sums_[0].first, sums_[0].second, root_score[0], best[0]);
      }
    }
    scan_.resize(frontier.size());
    for (size_t f = 0; f < num_features && frontier[0] != 0; ++f) {
      for (auto& st : scan_) st = ScanState{};
      for (const auto& [v, row] : sorted_rows_[f]) {
        const int nid = position_[row];
        if (nid < 0 || static_cast<size_t>(nid) >= slot_of.size()) continue;
        const int slot = slot_of[static_cast<size_t>(nid)];
        if (slot < 0) continue;
        auto& st = scan_[static_cast<size_t>(slot)];
        if (st.seen && v > st.prev) {
          const auto& [g, h] = sums_[static_cast<size_t>(frontier[static_cast<size_t>(slot)])];
          const double hr = h - st.hl;
          if (st.hl >= mcw && hr >= mcw) {
            const double gr = g - st.gl;
            const double gain = (st.gl * st.gl / (st.hl + lambda) + gr * gr / (hr + lambda)) -
                                root_score[static_cast<size_t>(slot)];
            auto& b = best[static_cast<size_t>(slot)];
            if (gain > b.gain) {
              double threshold = 0.5 * (st.prev + v);
              if (!(threshold > st.prev)) threshold = v;
              b = {static_cast<int>(f), threshold, gain};
            }
          }
        }
        st.gl += grad_[row];
        st.hl += hess_[row];
        st.prev = v;
        st.seen = true;
      }
    }

    std::vector<int> next;
    std::vector<int> split_to(nodes_.size(), -1);
    for (size_t s = 0; s < frontier.size(); ++s) {
      const auto& b = best[s];
      if (b.feature < 0 || !(b.gain > 0.0) || b.gain < params_.gamma) continue;
      const int id = frontier[s];
      const int left = static_cast<int>(nodes_.size());
      nodes_.push_back(TreeNode{});
      nodes_.push_back(TreeNode{});
      sums_.push_back({0.0, 0.0});
      sums_.push_back({0.0, 0.0});
      auto& node = nodes_[static_cast<size_t>(id)];
      node.feature = b.feature;
      node.threshold = b.threshold;
      node.left = left;
      node.right = left + 1;
      split_to[static_cast<size_t>(id)] = id;
      next.push_back(left);
      next.push_back(left + 1);
    }
    for (size_t row = 0; row < position_.size(); ++row) {
      const int nid = position_[row];
      if (nid < 0 || static_cast<size_t>(nid) >= split_to.size() ||
          split_to[static_cast<size_t>(nid)] < 0) {
        continue;
      }
      const auto& node = nodes_[static_cast<size_t>(nid)];
      const int child = data_.at(row, static_cast<size_t>(node.feature)) < node.threshold
                            ? node.left
                            : node.right;
      position_[row] = child;
      sums_[static_cast<size_t>(child)].first += grad_[row];
      sums_[static_cast<size_t>(child)].second += hess_[row];
    }
    return next;
  }

  // Root level: every sampled row belongs to node 0, so the rows are packed
  // into contiguous arrays and scored in separate passes. Candidate k puts
  // entries [0, k) on the left.
  void ScanRoot(size_t f, double g, double h, double root, SplitCandidate& best) {
    const auto& column = sorted_rows_[f];
    const size_t n = column.size();
    value_.resize(n + 1);
    g_left_.resize(n + 1);
    h_left_.resize(n + 1);
    gain_.resize(n + 1);
    size_t m = 0;
    double gl = 0.0, hl = 0.0;
    for (const auto& [v, row] : column) {
      value_[m] = v;
      g_left_[m] = gl;
      h_left_[m] = hl;
      const bool in = position_[row] == 0;
      gl += in ? grad_[row] : 0.0;
      hl += in ? hess_[row] : 0.0;
      m += in ? 1 : 0;
    }
    const double lambda = params_.lambda;
    for (size_t k = 1; k < m; ++k) {
      const double gr = g - g_left_[k];
      const double hr = h - h_left_[k];
      gain_[k] = (g_left_[k] * g_left_[k] / (h_left_[k] + lambda) + gr * gr / (hr + lambda)) - root;
    }
    const double mcw = params_.min_child_weight;
    for (size_t k = 1; k < m; ++k) {
      if (!(gain_[k] > best.gain)) continue;
      const double prev = value_[k - 1];
      const double v = value_[k];
      if (!(v > prev) || !(h_left_[k] >= mcw) || !(h - h_left_[k] >= mcw)) continue;
      double threshold = 0.5 * (prev + v);
      if (!(threshold > prev)) threshold = v;
      best = {static_cast<int>(f), threshold, gain_[k]};
    }
  }

  const dataset::DataTable& data_;
  const SortedColumns& sorted_rows_;
  const GbtParams& params_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  std::vector<int>& position_;
  std::vector<TreeNode> nodes_;
  std::vector<std::pair<double, double>> sums_;
  std::vector<ScanState> scan_;
  std::vector<double> value_, g_left_, h_left_, gain_;
};

void CheckSchema(const GbtModel& model, const dataset::DataTable& rows) {
  if (rows.schema().names() != model.feature_names()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "table features do not match the model's " +
                    std::to_string(model.num_features()) + " features");
  }
}

}  // namespace

void GbtParams::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
  };
  require(max_depth >= 1, "max_depth must be >= 1");
  require(n_estimators >= 1, "n_estimators must be >= 1");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning_rate must be > 0");
  require(gamma >= 0.0, "gamma must be >= 0");
  require(subsample > 0.0 && subsample <= 1.0, "subsample must lie in (0, 1]");
  require(lambda >= 0.0 && std::isfinite(lambda), "lambda must be >= 0");
  require(min_child_weight >= 0.0, "min_child_weight must be >= 0");
}

double Tree::Predict(std::span<const double> row) const {
  int id = 0;
  while (true) {
    const auto& n = nodes_[static_cast<size_t>(id)];
    if (n.is_leaf()) return n.output;
    id = row[static_cast<size_t>(n.feature)] < n.threshold ? n.left : n.right;
  }
}

int Tree::Depth() const {
  std::vector<int> depth(nodes_.size(), 0);
  int deepest = 0;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.is_leaf()) continue;
    depth[static_cast<size_t>(n.left)] = depth[i] + 1;
    depth[static_cast<size_t>(n.right)] = depth[i] + 1;
    deepest = std::max(deepest, depth[i] + 1);
  }
  return deepest;
}

GbtModel::GbtModel(std::vector<Tree> trees, double base_margin,
                   GbtParams params, std::vector<std::string> feature_names)
    : trees_(std::move(trees)),
      base_margin_(base_margin),
      params_(params),
      feature_names_(std::move(feature_names)) {}

double GbtModel::Margin(std::span<const double> row, size_t num_trees) const {
  double sum = 0.0;
  const size_t count = std::min(num_trees, trees_.size());
  for (size_t t = 0; t < count; ++t) sum += trees_[t].Predict(row);
  return base_margin_ + params_.learning_rate * sum;
}

double SimilarityScore(double residual_sum, double cover_sum, double lambda) {
  return residual_sum * residual_sum / (cover_sum + lambda);
}

double SimilarityScore(std::span<const double> residuals,
                       std::span<const double> covers, double lambda) {
  if (residuals.size() != covers.size() || residuals.empty()) {
    throw Error(ErrorCode::kLengthMismatch,
                "residuals and covers must be nonempty and of equal length");
  }
  const double r = std::accumulate(residuals.begin(), residuals.end(), 0.0);
  const double c = std::accumulate(covers.begin(), covers.end(), 0.0);
  return SimilarityScore(r, c, lambda);
}

double Gain(double left, double right, double root) { return left + right - root; }

double Sigmoid(double margin) {
  if (margin >= 0.0) return 1.0 / (1.0 + std::exp(-margin));
  const double e = std::exp(margin);
  return e / (1.0 + e);
}

GbtModel Fit(const dataset::DataTable& train, const GbtParams& params) {
  params.Validate();
  const size_t n = train.num_rows();
  const size_t positives = train.CountLabel(1);
  if (positives == 0 || positives == n) {
    throw Error(ErrorCode::kSingleClassTrain, "training data holds a single class");
  }
  if (n > UINT32_MAX) throw Error(ErrorCode::kInvalidArgument, "too many training rows");
  const size_t num_features = train.num_features();

  SortedColumns sorted_rows(num_features);
  for (size_t f = 0; f < num_features; ++f) {
    auto& order = sorted_rows[f];
    order.resize(n);
    for (size_t i = 0; i < n; ++i) order[i] = {train.at(i, f), i};
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  const double prevalence = static_cast<double>(positives) / static_cast<double>(n);
  const double base_margin = std::log(prevalence / (1.0 - prevalence));
  std::vector<double> margin(n, base_margin);
  std::vector<double> grad(n), hess(n);
  std::vector<int> position(n);
  std::vector<size_t> pool(n);
  const size_t sample_size =
      params.subsample >= 1.0
          ? n
          : std::max<size_t>(1, static_cast<size_t>(std::llround(
                                    params.subsample * static_cast<double>(n))));

  std::vector<Tree> trees;
  trees.reserve(static_cast<size_t>(params.n_estimators));
  TreeGrower grower(train, sorted_rows, params, grad, hess, position);
  for (int round = 0; round < params.n_estimators; ++round) {
    for (size_t i = 0; i < n; ++i) {
      const double p = Sigmoid(margin[i]);
      grad[i] = train.label(i) - p;
      hess[i] = std::max(p * (1.0 - p), kMinHessian);
    }
    if (sample_size == n) {
      std::fill(position.begin(), position.end(), 0);
    } else {
      // Partial Fisher-Yates; the stream depends only on (seed, round) so a
      // shorter run is an exact prefix of a longer one.
      std::fill(position.begin(), position.end(), -1);
      std::iota(pool.begin(), pool.end(), 0);
      RowStream rng(DeriveSeed(params.seed, {0x6b7, static_cast<uint64_t>(round)}));
      for (size_t i = 0; i < sample_size; ++i) {
        const size_t j = i + rng.Below(static_cast<uint32_t>(n - i));
        std::swap(pool[i], pool[j]);
        position[pool[i]] = 0;
      }
    }
    Tree tree = grower.Grow();
    for (size_t i = 0; i < n; ++i) {
      margin[i] += params.learning_rate * tree.Predict(train.row(i));
    }
    trees.push_back(std::move(tree));
  }
  return GbtModel(std::move(trees), base_margin, params, train.schema().names());
}

std::vector<double> PredictMargin(const GbtModel& model,
                                  const dataset::DataTable& rows) {
  CheckSchema(model, rows);
  std::vector<double> out(rows.num_rows());
  for (size_t r = 0; r < rows.num_rows(); ++r) out[r] = model.Margin(rows.row(r));
  return out;
}

std::vector<double> PredictProba(const GbtModel& model,
                                 const dataset::DataTable& rows) {
  auto out = PredictMargin(model, rows);
  for (double& v : out) v = Sigmoid(v);
  return out;
}

std::vector<int> PredictLabel(const GbtModel& model,
                              const dataset::DataTable& rows) {
  const auto proba = PredictProba(model, rows);
  std::vector<int> out(proba.size());
  for (size_t i = 0; i < proba.size(); ++i) out[i] = proba[i] >= 0.5 ? 1 : 0;
  return out;
}

double LogLoss(const GbtModel& model, const dataset::DataTable& rows,
               size_t num_trees) {
  CheckSchema(model, rows);
  double total = 0.0;
  for (size_t r = 0; r < rows.num_rows(); ++r) {
    const double m = model.Margin(rows.row(r), num_trees);
    // log(1 + exp(-m)) for y = 1, log(1 + exp(m)) for y = 0.
    const double z = rows.label(r) == 1 ? -m : m;
    total += z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  }
  return total / static_cast<double>(rows.num_rows());
}

}  // namespace slidex::gbt
