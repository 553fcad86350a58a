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
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include "slidex/cli.h"
#include "slidex/error.h"

namespace slidex::cli {
namespace {

using modelsel::ModelKind;
using modelsel::ParamGrid;
using modelsel::ParamValue;

std::string Trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Drops a trailing comment, ignoring '#' inside quotes.
std::string StripComment(const std::string& line) {
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

int BracketBalance(const std::string& s) {
  int depth = 0;
  bool quoted = false;
  for (char c : s) {
    if (c == '"') quoted = !quoted;
    if (quoted) continue;
    if (c == '[') ++depth;
    if (c == ']') --depth;
  }
  return depth;
}

class ValueParser {
 public:
  ValueParser(const std::string& text, int line) : text_(text), line_(line) {}

  nlohmann::json ParseAll() {
    nlohmann::json v = Parse();
    SkipSpace();
    if (pos_ != text_.size()) Fail("unexpected trailing text");
    return v;
  }

 private:
  nlohmann::json Parse() {
    SkipSpace();
    if (pos_ >= text_.size()) Fail("missing value");
    const char c = text_[pos_];
    if (c == '"') return ParseString();
    if (c == '[') return ParseArray();
    if (text_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return true;
    }
    if (text_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return false;
    }
    return ParseNumber();
  }

  nlohmann::json ParseString() {
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out += text_[pos_++];
    }
    if (pos_ >= text_.size()) Fail("unterminated string");
    ++pos_;
    return out;
  }

  nlohmann::json ParseArray() {
    ++pos_;
    nlohmann::json out = nlohmann::json::array();
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return out;
    }
    while (true) {
      out.push_back(Parse());
      SkipSpace();
      if (pos_ >= text_.size()) Fail("unterminated array");
      if (text_[pos_] == ']') {
        ++pos_;
        return out;
      }
      if (text_[pos_] != ',') Fail("expected ',' or ']'");
      ++pos_;
      SkipSpace();
      if (pos_ < text_.size() && text_[pos_] == ']') {  // trailing comma
        ++pos_;
        return out;
      }
    }
  }

  nlohmann::json ParseNumber() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) Fail("expected a value");
    pos_ += static_cast<size_t>(end - begin);
    return v;
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw Error(ErrorCode::kParseError,
                "config line " + std::to_string(line_) + ": " + what);
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_;
};

[[noreturn]] void BadKey(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::kParseError, "config key '" + key + "': " + what);
}

std::string GetString(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) BadKey(key, "expected a string");
  return v.get<std::string>();
}

double GetNumber(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) BadKey(key, "expected a number");
  return v.get<double>();
}

int GetInt(const nlohmann::json& v, const std::string& key) {
  const double d = GetNumber(v, key);
  if (d != static_cast<double>(static_cast<long>(d))) BadKey(key, "expected an integer");
  return static_cast<int>(d);
}

std::vector<std::string> GetStrings(const nlohmann::json& v, const std::string& key) {
  if (!v.is_array()) BadKey(key, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(GetString(e, key));
  return out;
}

std::vector<double> GetNumbers(const nlohmann::json& v, const std::string& key) {
  if (!v.is_array()) BadKey(key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(GetNumber(e, key));
  return out;
}

std::vector<ParamValue> GetParamValues(const nlohmann::json& v, const std::string& key) {
  std::vector<ParamValue> out;
  auto add = [&](const nlohmann::json& e) {
    if (e.is_number()) {
      out.emplace_back(e.get<double>());
    } else if (e.is_string()) {
      const auto s = e.get<std::string>();
      if (s == "inf") {
        out.emplace_back(std::numeric_limits<double>::infinity());
      } else {
        out.emplace_back(s);
      }
    } else {
      BadKey(key, "grid values must be numbers or strings");
    }
  };
  if (v.is_array()) {
    for (const auto& e : v) add(e);
  } else {
    add(v);
  }
  if (out.empty()) BadKey(key, "empty candidate list");
  return out;
}

void Apply(PipelineConfig& c, const std::string& key, const nlohmann::json& v,
           const std::filesystem::path& base_dir) {
  if (key.rfind("grid.", 0) == 0) {
    const auto dot = key.find('.', 5);
    if (dot == std::string::npos) BadKey(key, "expected grid.<model>.<parameter>");
    const ModelKind kind = modelsel::ModelKindFromName(key.substr(5, dot - 5));
    const std::string param = key.substr(dot + 1);
    auto axes = c.Grid(kind).axes();
    auto values = GetParamValues(v, key);
    // Rejects unknown names and ill-typed values up front.
    for (const auto& value : values) modelsel::MakeEstimator(kind, {{param, value}});
    const auto it = std::find_if(axes.begin(), axes.end(),
                                 [&](const auto& a) { return a.first == param; });
    if (it != axes.end()) {
      it->second = std::move(values);
    } else {
      axes.emplace_back(param, std::move(values));
    }
    c.grids.insert_or_assign(kind, ParamGrid(kind, std::move(axes)));
    return;
  }
  if (key == "data") {
    std::filesystem::path p = GetString(v, key);
    c.data = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  } else if (key == "out") {
    std::filesystem::path p = GetString(v, key);
    c.out = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  } else if (key == "label") {
    c.label = GetString(v, key);
  } else if (key == "features") {
    c.features = GetStrings(v, key);
  } else if (key == "categorical") {
    c.categorical = GetStrings(v, key);
  } else if (key == "test_fraction") {
    c.split.test_fraction = GetNumber(v, key);
  } else if (key == "seed") {
    const double d = GetNumber(v, key);
    if (d < 0 || d != static_cast<double>(static_cast<uint64_t>(d))) {
      BadKey(key, "expected a nonnegative integer");
    }
    c.split.seed = static_cast<uint64_t>(d);
  } else if (key == "folds") {
    c.folds = GetInt(v, key);
  } else if (key == "bins") {
    c.bins = GetInt(v, key);
  } else if (key == "drop") {
    c.drop = GetInt(v, key);
  } else if (key == "threads") {
    c.threads = GetInt(v, key);
  } else if (key == "models") {
    c.models.clear();
    for (const auto& name : GetStrings(v, key)) c.models.push_back(modelsel::ModelKindFromName(name));
  } else if (key == "curve_fractions") {
    c.curve_fractions = GetNumbers(v, key);
  } else {
    BadKey(key, "unknown setting");
  }
}

}  // namespace

dataset::FeatureSchema PipelineConfig::Schema() const {
  if (features.empty()) {
    const auto base = dataset::FeatureSchema::Default();
    std::vector<dataset::FeatureKind> kinds;
    for (const auto& name : base.names()) {
      const bool cat = std::find(categorical.begin(), categorical.end(), name) != categorical.end();
      kinds.push_back(cat ? dataset::FeatureKind::kCategorical
                          : dataset::FeatureKind::kContinuous);
    }
    return dataset::FeatureSchema(base.names(), label, kinds);
  }
  std::vector<dataset::FeatureKind> kinds;
  for (const auto& name : features) {
    const bool cat = std::find(categorical.begin(), categorical.end(), name) != categorical.end();
    kinds.push_back(cat ? dataset::FeatureKind::kCategorical : dataset::FeatureKind::kContinuous);
  }
  return dataset::FeatureSchema(features, label, kinds);
}

modelsel::ParamGrid PipelineConfig::Grid(ModelKind kind) const {
  const auto it = grids.find(kind);
  return it != grids.end() ? it->second : ParamGrid::Default(kind);
}

modelsel::CvOptions PipelineConfig::Cv() const {
  modelsel::CvOptions o;
  o.k = folds;
  o.seed = split.seed;
  o.threads = threads;
  return o;
}

void PipelineConfig::Validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
  };
  require(!data.empty(), "config needs a data path");
  require(split.test_fraction > 0.0 && split.test_fraction < 1.0,
          "test_fraction must lie in (0, 1)");
  require(folds >= 2, "folds must be >= 2");
  require(bins >= 2, "bins must be >= 2");
  require(drop >= 0, "drop must be >= 0");
  require(threads >= 0, "threads must be >= 0");
  require(!models.empty(), "models list is empty");
  require(!curve_fractions.empty(), "curve_fractions is empty");
  for (size_t i = 0; i < curve_fractions.size(); ++i) {
    require(curve_fractions[i] > 0.0 && curve_fractions[i] <= 1.0 &&
                (i == 0 || curve_fractions[i] > curve_fractions[i - 1]),
            "curve_fractions must increase strictly within (0, 1]");
  }
  const auto schema = Schema();
  for (const auto& name : categorical) {
    require(schema.IndexOf(name) >= 0,
            "categorical feature '" + name + "' is not in the feature list");
  }
  require(drop < static_cast<int>(schema.size()), "drop must be smaller than the feature count");
}

nlohmann::json PipelineConfig::ToJson() const {
  nlohmann::json grid_json = nlohmann::json::object();
  for (ModelKind kind : models) grid_json[modelsel::ModelKindName(kind)] = Grid(kind).ToJson();
  nlohmann::json model_names = nlohmann::json::array();
  for (ModelKind kind : models) model_names.push_back(modelsel::ModelKindName(kind));
  return {{"data", data.string()},
          {"label", label},
          {"features", Schema().names()},
          {"categorical", categorical},
          {"test_fraction", split.test_fraction},
          {"seed", split.seed},
          {"stratified", split.stratified},
          {"folds", folds},
          {"bins", bins},
          {"drop", drop},
          {"models", std::move(model_names)},
          {"curve_fractions", curve_fractions},
          {"grids", std::move(grid_json)}};
}

PipelineConfig ParseConfig(const std::string& text, const std::filesystem::path& base_dir) {
  PipelineConfig config;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  bool categorical_set = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const int start_line = line_no;
    std::string line = Trim(StripComment(raw));
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      if (line.back() != ']') {
        throw Error(ErrorCode::kParseError,
                    "config line " + std::to_string(line_no) + ": malformed section header");
      }
      section = Trim(line.substr(1, line.size() - 2));
      if (!section.empty()) section += '.';
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParseError,
                  "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = section + Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    // Arrays may continue over several lines.
    while (BracketBalance(value) > 0 && std::getline(in, raw)) {
      ++line_no;
      value += ' ' + Trim(StripComment(raw));
    }
    Apply(config, key, ValueParser(value, start_line).ParseAll(), base_dir);
    categorical_set = categorical_set || key == "categorical";
  }
  // The default class-coded factors only apply to features that are used.
  if (!categorical_set && !config.features.empty()) {
    std::erase_if(config.categorical, [&](const std::string& name) {
      return std::find(config.features.begin(), config.features.end(), name) ==
             config.features.end();
    });
  }
  return config;
}

PipelineConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str(), path.parent_path());
}

}  // namespace slidex::cli
