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

#ifndef SLIDEX_CLI_H_
#define SLIDEX_CLI_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "slidex/dataset.h"
#include "slidex/modelsel.h"

namespace slidex::cli {

struct PipelineConfig {
  std::filesystem::path data;
  std::string label = "LABEL";
  // Empty means the fifteen default factors.
  std::vector<std::string> features;
  std::vector<std::string> categorical = {"LANDUSE", "GEOLOGY"};
  dataset::SplitSpec split;
  int folds = 10;
  int bins = 10;
  int drop = 6;
  int threads = 0;
  std::filesystem::path out = "out";
  std::vector<modelsel::ModelKind> models = {
      modelsel::ModelKind::kGbt, modelsel::ModelKind::kKnn, modelsel::ModelKind::kLogReg,
      modelsel::ModelKind::kSvm, modelsel::ModelKind::kAdaBoost};
  std::vector<double> curve_fractions = {0.1, 0.325, 0.55, 0.775, 1.0};
  std::map<modelsel::ModelKind, modelsel::ParamGrid> grids;

  dataset::FeatureSchema Schema() const;
  modelsel::ParamGrid Grid(modelsel::ModelKind kind) const;
  modelsel::CvOptions Cv() const;
  void Validate() const;
  nlohmann::json ToJson() const;
};

// TOML-style key/value text:
//
//   data = "landslides.csv"      # resolved against `base_dir` if relative
//   seed = 15
//   features = ["SLOPE", "TWI"]
//
//   [grid.gbt]
//   max_depth = [2, 3]
//
// A grid section overrides only the parameters it names.
PipelineConfig ParseConfig(const std::string& text,
                           const std::filesystem::path& base_dir = {});
PipelineConfig LoadConfig(const std::filesystem::path& path);

// Loaded data plus its split, shared by the stages of one run.
class Workspace {
 public:
  explicit Workspace(PipelineConfig config);

  const PipelineConfig& config() const { return config_; }
  const dataset::DataTable& table() const { return table_; }
  const dataset::TrainTestSplit& split() const { return split_; }
  std::filesystem::path Path(const std::string& name) const { return config_.out / name; }

  // Wall-clock seconds per stage, kept out of the reports.
  void RecordTime(const std::string& stage, double seconds) { timings_[stage] = seconds; }
  void WriteTimings() const;

 private:
  PipelineConfig config_;
  dataset::DataTable table_;
  dataset::TrainTestSplit split_;
  std::map<std::string, double> timings_;
};

void WriteJson(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json ReadJson(const std::filesystem::path& path);

// Normality and chi-square screening of every feature on the full table;
// writes stats.json and stats.txt.
nlohmann::json CmdStats(Workspace& ws);

// Grid search on the training split, refit of the winner on the whole
// training split, and evaluation on the test split.
nlohmann::json CmdSearch(Workspace& ws, modelsel::ModelKind kind);

// SHAP values of a saved boosted model on the training split.
nlohmann::json CmdExplain(Workspace& ws, const std::optional<std::filesystem::path>& model_path);

// Drops the lowest-ranked features, searches again on the reduced schema,
// and compares against the all-feature search.
nlohmann::json CmdReduceRetrain(Workspace& ws);

// All stages; writes report.json.
nlohmann::json CmdPipeline(Workspace& ws);

std::string RenderStatsTable(const nlohmann::json& stats);

}  // namespace slidex::cli

#endif  // SLIDEX_CLI_H_
