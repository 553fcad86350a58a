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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "slidex/cli.h"
#include "slidex/dataset.h"
#include "slidex/error.h"

namespace {

using slidex::cli::PipelineConfig;

struct Overrides {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> folds;
  std::optional<int> drop;
  std::optional<int> threads;
  std::optional<std::string> data;
};

PipelineConfig ResolveConfig(const Overrides& o) {
  PipelineConfig config = o.config_path.empty() ? PipelineConfig{}
                                                 : slidex::cli::LoadConfig(o.config_path);
  if (o.data) config.data = *o.data;
  if (o.seed) config.split.seed = *o.seed;
  if (o.out) config.out = *o.out;
  if (o.folds) config.folds = *o.folds;
  if (o.drop) config.drop = *o.drop;
  if (o.threads) config.threads = *o.threads;
  return config;
}

int ReportError(const std::string& code, const std::string& message) {
  nlohmann::json j = {{"error", {{"code", code}, {"message", message}}}};
  std::cerr << j.dump() << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landslide susceptibility modelling toolkit"};
  app.require_subcommand(1);
  // Global options may also follow the subcommand.
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config_path, "Configuration file");
  app.add_option("--data", o.data, "Input CSV (overrides the config)");
  app.add_option("--seed", o.seed, "Split and cross-validation seed");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--folds", o.folds, "Cross-validation folds");
  app.add_option("--drop", o.drop, "Features to drop in the reduction stage");
  app.add_option("--threads", o.threads, "Grid-search worker threads (0 = all cores)");

  auto* stats = app.add_subcommand("stats", "Normality and chi-square screening");
  auto* search = app.add_subcommand("search", "Grid search, refit, and test evaluation");
  std::string model_name = "gbt";
  search->add_option("--model", model_name, "Classifier")
      ->check(CLI::IsMember({"gbt", "knn", "logreg", "svm", "adaboost"}));
  auto* explain = app.add_subcommand("explain", "TreeSHAP values of a boosted model");
  std::optional<std::string> model_path;
  explain->add_option("--model-path", model_path, "Model JSON (default: <out>/model_gbt.json)");
  auto* reduce = app.add_subcommand("reduce", "SHAP-driven feature reduction and retraining");
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage");
  auto* synth = app.add_subcommand("synth", "Write the synthetic benchmark stand-in as CSV");
  std::string synth_path;
  uint64_t synth_seed = 15;
  size_t synth_rows = 196;
  synth->add_option("path", synth_path, "Output CSV")->required();
  synth->add_option("--synth-seed", synth_seed, "Generator seed");
  synth->add_option("--rows-per-class", synth_rows, "Rows per class");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return ReportError("usage", e.what());
  }

  try {
    if (synth->parsed()) {
      slidex::dataset::WriteCsv(slidex::dataset::MakeSurrogate(synth_seed, synth_rows),
                                synth_path);
      return 0;
    }
    slidex::cli::Workspace ws(ResolveConfig(o));
    nlohmann::json result;
    if (stats->parsed()) {
      result = slidex::cli::CmdStats(ws);
      std::cout << slidex::cli::RenderStatsTable(result);
    } else if (search->parsed()) {
      result = slidex::cli::CmdSearch(ws, slidex::modelsel::ModelKindFromName(model_name));
      std::cout << nlohmann::json{{"best_params", result["best_params"]},
                                  {"cv_mean", result["cv_mean"]},
                                  {"test_auc", result["test"]["auc"]}}
                       .dump(2)
                << '\n';
    } else if (explain->parsed()) {
      std::optional<std::filesystem::path> path;
      if (model_path) path = *model_path;
      result = slidex::cli::CmdExplain(ws, path);
      std::cout << nlohmann::json{{"ranking", result["ranking"]}}.dump(2) << '\n';
    } else if (reduce->parsed()) {
      result = slidex::cli::CmdReduceRetrain(ws);
      std::cout << nlohmann::json{{"reduction", result["reduction"]},
                                  {"cv_delta", result["cv_delta"]}}
                       .dump(2)
                << '\n';
    } else if (pipeline->parsed()) {
      result = slidex::cli::CmdPipeline(ws);
      std::cout << nlohmann::json{{"search", result["search"]},
                                  {"shap_ranking", result["shap_ranking"]},
                                  {"reduce", result["reduce"]["reduced"]},
                                  {"cv_delta", result["reduce"]["cv_delta"]}}
                       .dump(2)
                << '\n';
    }
    ws.WriteTimings();
    return 0;
  } catch (const slidex::Error& e) {
    return ReportError(std::string(slidex::ErrorCodeName(e.code())), e.what());
  } catch (const std::exception& e) {
    return ReportError("internal", e.what());
  }
}
