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

#include "slidex/dataset.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "slidex/error.h"
#include "slidex/random.h"

namespace slidex::dataset {
namespace {

std::string Trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      current.push_back(c);
    } else if (c == ',' && !quoted) {
      fields.push_back(Trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(Trim(current));
  return fields;
}

std::string Where(size_t line, const std::string& column) {
  return "row " + std::to_string(line) + ", column '" + column + "'";
}

}  // namespace

FeatureSchema::FeatureSchema(std::vector<std::string> names,
                             std::string label_name,
                             std::vector<FeatureKind> kinds)
    : names_(std::move(names)),
      label_name_(std::move(label_name)),
      kinds_(std::move(kinds)) {
  if (names_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "schema has no features");
  }
  if (kinds_.size() != names_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "schema kinds and names differ in length");
  }
  if (label_name_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "label name is empty");
  }
  std::set<std::string> seen;
  for (const auto& name : names_) {
    if (name.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty feature name");
    }
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate feature name '" + name + "'");
    }
  }
  if (seen.count(label_name_)) {
    throw Error(ErrorCode::kInvalidArgument,
                "label '" + label_name_ + "' is also a feature");
  }
}

FeatureSchema::FeatureSchema(std::vector<std::string> names,
                             std::string label_name)
    : FeatureSchema(names, std::move(label_name),
                    std::vector<FeatureKind>(names.size(),
                                             FeatureKind::kContinuous)) {}

FeatureSchema FeatureSchema::Default() {
  std::vector<std::string> names = {
      "PROFILE", "PLAN",     "CHANGE", "LANDUSE",  "ELEVATION",
      "SLOPE",   "ASPECT",   "TWI",    "SPI",      "DRAINAGE",
      "NDVI",    "RAINFALL", "FAULTLINES", "ROAD", "GEOLOGY"};
  std::vector<FeatureKind> kinds(names.size(), FeatureKind::kContinuous);
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == "LANDUSE" || names[i] == "GEOLOGY") {
      kinds[i] = FeatureKind::kCategorical;
    }
  }
  return FeatureSchema(std::move(names), "LABEL", std::move(kinds));
}

int FeatureSchema::IndexOf(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

FeatureSchema FeatureSchema::Select(std::span<const size_t> indices) const {
  std::vector<std::string> names;
  std::vector<FeatureKind> kinds;
  for (size_t i : indices) {
    names.push_back(names_.at(i));
    kinds.push_back(kinds_.at(i));
  }
  return FeatureSchema(std::move(names), label_name_, std::move(kinds));
}

DataTable::DataTable(FeatureSchema schema, std::vector<double> values,
                     std::vector<int> labels)
    : schema_(std::move(schema)),
      values_(std::move(values)),
      labels_(std::move(labels)) {
  if (values_.size() != labels_.size() * schema_.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "value matrix does not match rows x features");
  }
  for (size_t r = 0; r < labels_.size(); ++r) {
    if (labels_[r] != 0 && labels_[r] != 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "label of row " + std::to_string(r) + " is not 0/1");
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kMissingValue, "non-finite feature value");
    }
  }
}

std::vector<double> DataTable::Column(size_t f) const {
  std::vector<double> out(num_rows());
  for (size_t r = 0; r < num_rows(); ++r) out[r] = at(r, f);
  return out;
}

size_t DataTable::CountLabel(int label) const {
  return static_cast<size_t>(std::count(labels_.begin(), labels_.end(), label));
}

DataTable DataTable::SelectRows(std::span<const size_t> rows) const {
  std::vector<double> values;
  std::vector<int> labels;
  values.reserve(rows.size() * num_features());
  labels.reserve(rows.size());
  for (size_t r : rows) {
    auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
    labels.push_back(labels_.at(r));
  }
  return DataTable(schema_, std::move(values), std::move(labels));
}

DataTable DataTable::SelectFeatures(std::span<const size_t> features) const {
  std::vector<double> values;
  values.reserve(num_rows() * features.size());
  for (size_t r = 0; r < num_rows(); ++r) {
    for (size_t f : features) values.push_back(at(r, f));
  }
  return DataTable(schema_.Select(features), std::move(values), labels_);
}

DataTable DataTable::SelectFeatures(const std::vector<std::string>& names) const {
  std::vector<size_t> indices;
  for (const auto& name : names) {
    const int idx = schema_.IndexOf(name);
    if (idx < 0) {
      throw Error(ErrorCode::kMissingColumn, "unknown feature '" + name + "'");
    }
    indices.push_back(static_cast<size_t>(idx));
  }
  return SelectFeatures(indices);
}

DataTable ParseCsv(const std::string& text, const FeatureSchema& schema) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    header = SplitFields(line);
    break;
  }
  if (header.empty()) throw Error(ErrorCode::kEmptyFile, "file has no header row");
  if (!header[0].empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    header[0] = header[0].substr(3);
  }

  std::unordered_map<std::string, size_t> position;
  for (size_t i = 0; i < header.size(); ++i) position.emplace(header[i], i);
  auto locate = [&](const std::string& name) {
    auto it = position.find(name);
    if (it == position.end()) {
      throw Error(ErrorCode::kMissingColumn, "header lacks column '" + name + "'");
    }
    return it->second;
  };
  std::vector<size_t> feature_pos;
  for (const auto& name : schema.names()) feature_pos.push_back(locate(name));
  const size_t label_pos = locate(schema.label_name());

  auto parse_cell = [](const std::string& cell, double* out) {
    if (cell.empty()) return false;
    char* end = nullptr;
    errno = 0;
    *out = std::strtod(cell.c_str(), &end);
    return end == cell.c_str() + cell.size() && errno != ERANGE &&
           std::isfinite(*out);
  };

  std::vector<double> values;
  std::vector<int> labels;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const auto fields = SplitFields(line);
    auto cell = [&](size_t pos, const std::string& column) -> const std::string& {
      if (pos >= fields.size() || fields[pos].empty()) {
        throw Error(ErrorCode::kMissingValue, "missing value at " + Where(line_no, column));
      }
      return fields[pos];
    };
    for (size_t f = 0; f < feature_pos.size(); ++f) {
      const auto& name = schema.names()[f];
      double v;
      if (!parse_cell(cell(feature_pos[f], name), &v)) {
        throw Error(ErrorCode::kNonNumericCell, "non-numeric cell at " + Where(line_no, name));
      }
      values.push_back(v);
    }
    double y;
    if (!parse_cell(cell(label_pos, schema.label_name()), &y) ||
        (y != 0.0 && y != 1.0)) {
      throw Error(ErrorCode::kNonNumericCell,
                  "label is not 0/1 at " + Where(line_no, schema.label_name()));
    }
    labels.push_back(static_cast<int>(y));
  }
  if (labels.empty()) throw Error(ErrorCode::kEmptyFile, "file has no data rows");
  return DataTable(schema, std::move(values), std::move(labels));
}

DataTable LoadCsv(const std::filesystem::path& path, const FeatureSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseCsv(buffer.str(), schema);
}

void WriteCsv(const DataTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (const auto& name : table.schema().names()) out << name << ',';
  out << table.schema().label_name() << '\n';
  out.precision(17);
  for (size_t r = 0; r < table.num_rows(); ++r) {
    for (double v : table.row(r)) out << v << ',';
    out << table.label(r) << '\n';
  }
}

TrainTestSplit StratifiedSplit(const DataTable& table, const SplitSpec& options) {
  if (!(options.test_fraction > 0.0 && options.test_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "test_fraction must lie in (0, 1)");
  }
  Rng rng(DeriveSeed(options.seed, {0x5e11}));
  std::vector<size_t> train, test;
  if (options.stratified) {
    for (int cls : {0, 1}) {
      std::vector<size_t> members;
      for (size_t r = 0; r < table.num_rows(); ++r) {
        if (table.label(r) == cls) members.push_back(r);
      }
      const auto n_test = static_cast<size_t>(
          std::llround(static_cast<double>(members.size()) * options.test_fraction));
      if (n_test == 0 || n_test >= members.size()) {
        throw Error(ErrorCode::kDegenerateClass,
                    "class " + std::to_string(cls) + " with " +
                        std::to_string(members.size()) +
                        " rows cannot populate both sides of the split");
      }
      rng.Shuffle(std::span<size_t>(members));
      test.insert(test.end(), members.begin(), members.begin() + n_test);
      train.insert(train.end(), members.begin() + n_test, members.end());
    }
  } else {
    std::vector<size_t> all(table.num_rows());
    std::iota(all.begin(), all.end(), 0);
    rng.Shuffle(std::span<size_t>(all));
    const auto n_test = static_cast<size_t>(
        std::llround(static_cast<double>(all.size()) * options.test_fraction));
    if (n_test == 0 || n_test >= all.size()) {
      throw Error(ErrorCode::kDegenerateClass, "split leaves one side empty");
    }
    test.assign(all.begin(), all.begin() + n_test);
    train.assign(all.begin() + n_test, all.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return TrainTestSplit{table.SelectRows(train), table.SelectRows(test),
                        std::move(train), std::move(test)};
}

nlohmann::json SplitToJson(const TrainTestSplit& split, const SplitSpec& options) {
  return {{"test_fraction", options.test_fraction},
          {"seed", options.seed},
          {"stratified", options.stratified},
          {"train_indices", split.train_indices},
          {"test_indices", split.test_indices}};
}

std::vector<int> QuantileBin(std::span<const double> column, int k) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 bins");
  if (column.size() < static_cast<size_t>(k)) {
    throw Error(ErrorCode::kInvalidArgument, "fewer values than bins");
  }
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) {
    throw Error(ErrorCode::kTooFewDistinctValues, "column is constant");
  }
  const auto n = static_cast<double>(sorted.size());
  std::vector<int> bins(column.size());
  for (size_t i = 0; i < column.size(); ++i) {
    const auto below = static_cast<double>(
        std::lower_bound(sorted.begin(), sorted.end(), column[i]) - sorted.begin());
    bins[i] = std::min(k - 1, static_cast<int>(std::floor(k * below / n)));
  }
  return bins;
}

}  // namespace slidex::dataset
