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
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "slidex/cli.h"
#include "slidex/error.h"
#include "slidex/explain.h"
#include "slidex/gbt.h"
#include "slidex/learning_curve.h"
#include "slidex/metrics.h"
#include "slidex/stats.h"

namespace slidex::cli {
namespace {

using modelsel::ModelKind;
using nlohmann::json;

class StageTimer {
 public:
  StageTimer(Workspace& ws, std::string stage)
      : ws_(ws), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    ws_.RecordTime(stage_, std::chrono::duration<double>(elapsed).count());
  }

 private:
  Workspace& ws_;
  std::string stage_;
  std::chrono::steady_clock::time_point start_;
};

json ErrorJson(const Error& e) {
  return {{"code", std::string(ErrorCodeName(e.code()))}, {"message", e.what()}};
}

void WriteRocCsv(const metrics::RocCurve& roc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.precision(17);
  out << "fpr,tpr\n";
  for (const auto& p : roc.points) out << p.fpr << ',' << p.tpr << '\n';
}

json FoldsJson(const modelsel::FoldAssignment& folds) {
  return {{"k", folds.k}, {"seed", folds.seed}, {"fold", folds.fold}};
}

// Search, refit, and test evaluation on the given tables; `suffix` keeps
// the artifacts of the reduced stage apart.
json SearchStage(Workspace& ws, ModelKind kind, const dataset::DataTable& train,
                 const dataset::DataTable& test, const std::string& suffix) {
  const auto& config = ws.config();
  const std::string name = modelsel::ModelKindName(kind) + suffix;
  const auto grid = config.Grid(kind);
  const auto cv = config.Cv();

  std::ofstream log(ws.Path("search_" + name + ".jsonl"));
  if (!log) throw Error(ErrorCode::kIoError, "cannot write search log for " + name);
  const auto result = modelsel::GridSearch(
      train, grid, cv, [&](size_t index, const modelsel::CvResult& r) {
        json record = modelsel::ToJson(r);
        record["index"] = index;
        log << record.dump() << '\n';
      });
  log.close();
  const auto& winner = result.winner();
  if (winner.failed()) {
    throw Error(ErrorCode::kInvalidArgument,
                "every " + name + " grid point failed; first error: " + winner.error);
  }

  const auto estimator = modelsel::MakeEstimator(kind, winner.params);
  const auto model = estimator->Fit(train, config.split.seed);
  const auto labels = model->PredictLabel(test);
  const auto scores = model->PredictScore(test);
  const auto eval = metrics::Evaluate(test.labels(), labels, scores);

  WriteJson(model->ToJson(), ws.Path("model_" + name + ".json"));
  WriteJson(FoldsJson(modelsel::StratifiedKFold(train, cv.k, cv.seed)),
            ws.Path("folds_" + name + ".json"));
  WriteRocCsv(eval.roc, ws.Path("roc_" + name + ".csv"));

  json summary = {{"model", modelsel::ModelKindName(kind)},
                  {"features", train.schema().names()},
                  {"grid", grid.ToJson()},
                  {"best_index", result.best},
                  {"best_params", modelsel::ToJson(winner.params)},
                  {"cv_mean", winner.mean},
                  {"cv_mean_pct", metrics::Percent(winner.mean)},
                  {"cv_std", winner.std},
                  {"cv_fold_scores", winner.fold_scores},
                  {"test", metrics::ToJson(eval)},
                  {"model_file", "model_" + name + ".json"}};
  WriteJson(summary, ws.Path("search_" + name + ".json"));
  return summary;
}

explain::FeatureImportance ImportanceFromJson(const json& j,
                                              const std::vector<std::string>& names) {
  explain::FeatureImportance imp;
  imp.feature_names = names;
  imp.mean_abs.assign(names.size(), 0.0);
  for (const auto& entry : j.at("ranking")) {
    const auto feature = entry.at("feature").get<std::string>();
    const auto it = std::find(names.begin(), names.end(), feature);
    if (it == names.end()) {
      throw Error(ErrorCode::kSchemaMismatch, "ranked feature '" + feature + "' not in schema");
    }
    const auto f = static_cast<size_t>(it - names.begin());
    imp.mean_abs[f] = entry.at("mean_abs_shap").get<double>();
    imp.ranking.push_back(f);
  }
  if (imp.ranking.size() != names.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "importance ranking does not cover the schema");
  }
  return imp;
}

json CompactEval(const json& search) {
  const auto& test = search.at("test");
  return {{"best_params", search.at("best_params")},
          {"cv_mean", search.at("cv_mean")},
          {"cv_mean_pct", search.at("cv_mean_pct")},
          {"cv_std", search.at("cv_std")},
          {"test_accuracy_pct", test.at("class_report").at("accuracy_pct")},
          {"test_weighted_f1_pct", test.at("class_report").at("weighted_f1_pct")},
          {"test_auc", test.at("auc")},
          {"test_auc_pct", test.at("auc_pct")},
          {"confusion", test.at("confusion")}};
}

modelsel::ParamPoint PointFromJson(const json& params) {
  modelsel::ParamPoint point;
  for (const auto& [name, v] : params.items()) {
    if (v.is_number()) {
      point.emplace_back(name, v.get<double>());
    } else if (v == "inf") {
      point.emplace_back(name, std::numeric_limits<double>::infinity());
    } else {
      point.emplace_back(name, v.get<std::string>());
    }
  }
  return point;
}

std::string FormatNumber(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

Workspace::Workspace(PipelineConfig config)
    : config_((config.Validate(), std::move(config))),
      table_(dataset::LoadCsv(config_.data, config_.Schema())),
      split_(dataset::StratifiedSplit(table_, config_.split)) {
  std::error_code ec;
  std::filesystem::create_directories(config_.out, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + config_.out.string());
  WriteJson(config_.ToJson(), Path("config.json"));
  WriteJson(dataset::SplitToJson(split_, config_.split), Path("split.json"));
}

void Workspace::WriteTimings() const {
  json j = json::object();
  for (const auto& [stage, seconds] : timings_) j[stage] = seconds;
  WriteJson(j, Path("timings.json"));
}

void WriteJson(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json ReadJson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

json CmdStats(Workspace& ws) {
  StageTimer timer(ws, "stats");
  const auto& table = ws.table();
  const auto& schema = table.schema();
  const auto count = static_cast<long>(schema.size());
  json normality = json::array();
  json chi = json::array();
  int significant = 0;
  for (size_t f = 0; f < schema.size(); ++f) {
    const std::string& name = schema.names()[f];
    const auto column = table.Column(f);
    try {
      auto r = stats::ShapiroWilk(column);
      r.feature = name;
      normality.push_back(stats::ToJson(r));
    } catch (const Error& e) {
      normality.push_back({{"feature", name}, {"error", ErrorJson(e)}});
    }
    try {
      const bool categorical = schema.kinds()[f] == dataset::FeatureKind::kCategorical;
      const auto contingency =
          stats::BuildContingency(column, table.labels(), ws.config().bins, categorical);
      auto r = stats::ChiSquareTest(contingency, count);
      r.feature = name;
      if (r.p_value <= 0.05) ++significant;
      json entry = stats::ToJson(r);
      entry["levels"] = contingency.rows();
      chi.push_back(std::move(entry));
    } catch (const Error& e) {
      chi.push_back({{"feature", name}, {"error", ErrorJson(e)}});
    }
  }
  json out = {{"rows", table.num_rows()},
              {"normality", std::move(normality)},
              {"chi_square", std::move(chi)},
              {"chi_square_significant_at_0_05", significant}};
  WriteJson(out, ws.Path("stats.json"));
  std::ofstream txt(ws.Path("stats.txt"));
  txt << RenderStatsTable(out);
  return out;
}

std::string RenderStatsTable(const json& stats) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %10s %12s %14s %6s %12s\n", "Feature", "SW W",
                "SW p-value", "Chi-square", "dof", "Chi p-value");
  out << line;
  const auto& normality = stats.at("normality");
  const auto& chi = stats.at("chi_square");
  for (size_t i = 0; i < normality.size(); ++i) {
    const auto& n = normality[i];
    const auto& c = chi[i];
    std::string w = "error", wp = n.contains("error") ? n["error"]["code"].get<std::string>() : "";
    if (!n.contains("error")) {
      w = FormatNumber("%.3f", n["w_statistic"].get<double>());
      wp = FormatNumber("%.3g", n["p_value"].get<double>());
    }
    std::string x = "error", dof = "-", xp = c.contains("error") ? c["error"]["code"].get<std::string>() : "";
    if (!c.contains("error")) {
      x = FormatNumber("%.3f", c["statistic"].get<double>());
      dof = std::to_string(c["dof"].get<long>());
      xp = FormatNumber("%.3g", c["p_value"].get<double>());
    }
    std::snprintf(line, sizeof(line), "%-12s %10s %12s %14s %6s %12s\n",
                  n["feature"].get<std::string>().c_str(), w.c_str(), wp.c_str(), x.c_str(),
                  dof.c_str(), xp.c_str());
    out << line;
  }
  return out.str();
}

json CmdSearch(Workspace& ws, ModelKind kind) {
  StageTimer timer(ws, "search_" + modelsel::ModelKindName(kind));
  return SearchStage(ws, kind, ws.split().train, ws.split().test, "");
}

json CmdExplain(Workspace& ws, const std::optional<std::filesystem::path>& model_path) {
  StageTimer timer(ws, "explain");
  const auto path = model_path.value_or(ws.Path("model_gbt.json"));
  const auto model = gbt::GbtModel::FromJson(ReadJson(path));
  const auto train = ws.split().train.SelectFeatures(model.feature_names());
  const auto shap = explain::TreeShap(model, train);
  const auto importance = explain::RankFeatures(shap);
  const auto points = explain::SummaryPoints(shap, train);

  explain::WriteShapCsv(shap, train, ws.Path("shap.csv"));
  explain::WriteSummaryCsv(points, shap, ws.Path("summary_points.csv"));
  json imp = explain::ToJson(importance);
  imp["expected_value"] = shap.expected_value;
  imp["rows"] = shap.num_rows;
  WriteJson(imp, ws.Path("importance.json"));
  return {{"ranking", importance.RankedNames()},
          {"importance", imp},
          {"shap_rows", shap.num_rows * shap.num_features()},
          {"summary_points", points.size()}};
}

json CmdReduceRetrain(Workspace& ws) {
  if (!std::filesystem::exists(ws.Path("importance.json"))) {
    if (!std::filesystem::exists(ws.Path("model_gbt.json"))) CmdSearch(ws, ModelKind::kGbt);
    CmdExplain(ws, std::nullopt);
  }
  StageTimer timer(ws, "reduce");
  const auto& names = ws.table().schema().names();
  const auto importance = ImportanceFromJson(ReadJson(ws.Path("importance.json")), names);
  const auto plan = explain::SelectFeatures(importance, ws.config().drop);
  WriteJson(explain::ToJson(plan), ws.Path("reduction.json"));

  const auto train = ws.split().train.SelectFeatures(plan.retained);
  const auto test = ws.split().test.SelectFeatures(plan.retained);
  const json reduced = SearchStage(ws, ModelKind::kGbt, train, test, "_reduced");
  const json all = ReadJson(ws.Path("search_gbt.json"));

  const auto winner =
      modelsel::MakeEstimator(ModelKind::kGbt, PointFromJson(reduced.at("best_params")));
  const auto curve = metrics::ComputeLearningCurve(train, *winner, ws.config().curve_fractions,
                                                   ws.config().Cv());
  WriteJson(metrics::ToJson(curve), ws.Path("learning_curve.json"));

  const double delta = reduced.at("cv_mean").get<double>() - all.at("cv_mean").get<double>();
  json out = {{"reduction", explain::ToJson(plan)},
              {"all_features", CompactEval(all)},
              {"reduced", CompactEval(reduced)},
              {"cv_delta", delta},
              {"learning_curve", metrics::ToJson(curve)}};
  WriteJson(out, ws.Path("reduce.json"));
  return out;
}

json CmdPipeline(Workspace& ws) {
  json report = {{"config", ws.config().ToJson()}};
  report["stats"] = CmdStats(ws);
  json searches = json::object();
  for (ModelKind kind : ws.config().models) {
    const json s = CmdSearch(ws, kind);
    searches[modelsel::ModelKindName(kind)] = CompactEval(s);
  }
  report["search"] = std::move(searches);
  const auto& models = ws.config().models;
  if (std::find(models.begin(), models.end(), ModelKind::kGbt) == models.end()) {
    CmdSearch(ws, ModelKind::kGbt);
  }
  const json explained = CmdExplain(ws, std::nullopt);
  report["shap_ranking"] = explained.at("importance").at("ranking");
  report["reduce"] = CmdReduceRetrain(ws);
  report["final_model"] = "model_gbt_reduced.json";
  WriteJson(report, ws.Path("report.json"));
  return report;
}

}  // namespace slidex::cli
