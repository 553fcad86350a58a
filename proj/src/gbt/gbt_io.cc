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

#include "slidex/error.h"
#include "slidex/gbt.h"

namespace slidex::gbt {
namespace {

nlohmann::json NodeToJson(const Tree& tree, int id) {
  const auto& n = tree.node(id);
  if (n.is_leaf()) return {{"output", n.output}, {"cover", n.cover}};
  return {{"feature", n.feature},
          {"threshold", n.threshold},
          {"cover", n.cover},
          {"left", NodeToJson(tree, n.left)},
          {"right", NodeToJson(tree, n.right)}};
}

int NodeFromJson(const nlohmann::json& j, std::vector<TreeNode>& nodes) {
  const int id = static_cast<int>(nodes.size());
  nodes.push_back(TreeNode{});
  TreeNode node;
  node.cover = j.at("cover").get<double>();
  if (j.contains("output")) {
    node.output = j.at("output").get<double>();
  } else {
    node.feature = j.at("feature").get<int>();
    node.threshold = j.at("threshold").get<double>();
    node.left = NodeFromJson(j.at("left"), nodes);
    node.right = NodeFromJson(j.at("right"), nodes);
  }
  nodes[static_cast<size_t>(id)] = node;
  return id;
}

}  // namespace

nlohmann::json ParamsToJson(const GbtParams& p) {
  nlohmann::json j = {{"max_depth", p.max_depth},
                      {"n_estimators", p.n_estimators},
                      {"learning_rate", p.learning_rate},
                      {"subsample", p.subsample},
                      {"lambda", p.lambda},
                      {"min_child_weight", p.min_child_weight},
                      {"seed", p.seed}};
  // JSON has no infinity; an unbounded gamma is written as a string.
  if (std::isinf(p.gamma)) {
    j["gamma"] = "inf";
  } else {
    j["gamma"] = p.gamma;
  }
  return j;
}

GbtParams ParamsFromJson(const nlohmann::json& j) {
  GbtParams p;
  p.max_depth = j.at("max_depth").get<int>();
  p.n_estimators = j.at("n_estimators").get<int>();
  p.learning_rate = j.at("learning_rate").get<double>();
  p.gamma = j.at("gamma").is_string() ? INFINITY : j.at("gamma").get<double>();
  p.subsample = j.at("subsample").get<double>();
  p.lambda = j.value("lambda", 1.0);
  p.min_child_weight = j.value("min_child_weight", 1.0);
  p.seed = j.value("seed", uint64_t{0});
  return p;
}

nlohmann::json GbtModel::ToJson() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(NodeToJson(t, 0));
  return {{"kind", "gbt"},
          {"params", ParamsToJson(params_)},
          {"base_margin", base_margin_},
          {"feature_names", feature_names_},
          {"trees", std::move(trees)}};
}

GbtModel GbtModel::FromJson(const nlohmann::json& j) {
  const std::string kind = j.value("kind", std::string("gbt"));
  if (kind != "gbt") {
    throw Error(ErrorCode::kWrongModelKind,
                "expected a gbt model, found '" + kind + "'");
  }
  try {
    std::vector<Tree> trees;
    for (const auto& t : j.at("trees")) {
      std::vector<TreeNode> nodes;
      NodeFromJson(t, nodes);
      trees.emplace_back(std::move(nodes));
    }
    return GbtModel(std::move(trees), j.at("base_margin").get<double>(),
                    ParamsFromJson(j.at("params")),
                    j.at("feature_names").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("malformed model: ") + e.what());
  }
}

}  // namespace slidex::gbt
