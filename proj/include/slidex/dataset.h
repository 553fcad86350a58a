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

#ifndef SLIDEX_DATASET_H_
#define SLIDEX_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace slidex::dataset {

enum class FeatureKind { kContinuous, kCategorical };

// Ordered feature identifiers plus the label column name.
class FeatureSchema {
 public:
  FeatureSchema(std::vector<std::string> names, std::string label_name,
                std::vector<FeatureKind> kinds);
  // All features continuous.
  FeatureSchema(std::vector<std::string> names, std::string label_name);

  // The fifteen landslide causal factors; LANDUSE and GEOLOGY are
  // class-coded.
  static FeatureSchema Default();

  const std::vector<std::string>& names() const { return names_; }
  const std::string& label_name() const { return label_name_; }
  const std::vector<FeatureKind>& kinds() const { return kinds_; }
  size_t size() const { return names_.size(); }

  // Index of `name`, or -1.
  int IndexOf(const std::string& name) const;

  // Schema restricted to `indices`, in the given order.
  FeatureSchema Select(std::span<const size_t> indices) const;

  bool operator==(const FeatureSchema&) const = default;

 private:
  std::vector<std::string> names_;
  std::string label_name_;
  std::vector<FeatureKind> kinds_;
};

// Immutable row-major feature matrix with binary labels.
class DataTable {
 public:
  DataTable(FeatureSchema schema, std::vector<double> values,
            std::vector<int> labels);

  const FeatureSchema& schema() const { return schema_; }
  size_t num_rows() const { return labels_.size(); }
  size_t num_features() const { return schema_.size(); }

  std::span<const double> row(size_t r) const {
    return {values_.data() + r * num_features(), num_features()};
  }
  double at(size_t r, size_t f) const { return values_[r * num_features() + f]; }
  int label(size_t r) const { return labels_[r]; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<double>& values() const { return values_; }

  std::vector<double> Column(size_t f) const;
  size_t CountLabel(int label) const;

  DataTable SelectRows(std::span<const size_t> rows) const;
  DataTable SelectFeatures(std::span<const size_t> features) const;
  DataTable SelectFeatures(const std::vector<std::string>& names) const;

 private:
  FeatureSchema schema_;
  std::vector<double> values_;
  std::vector<int> labels_;
};

struct SplitSpec {
  double test_fraction = 0.33;
  uint64_t seed = 15;
  bool stratified = true;
};

struct TrainTestSplit {
  DataTable train;
  DataTable test;
  std::vector<size_t> train_indices;
  std::vector<size_t> test_indices;
};

// Reads a comma-delimited file with a header row. Columns are matched by
// name; columns not in the schema are ignored.
DataTable LoadCsv(const std::filesystem::path& path, const FeatureSchema& schema);
DataTable ParseCsv(const std::string& text, const FeatureSchema& schema);

void WriteCsv(const DataTable& table, const std::filesystem::path& path);

// Per class: seeded permutation, first round(count * test_fraction) rows
// go to test. Index lists are returned sorted ascending.
TrainTestSplit StratifiedSplit(const DataTable& table, const SplitSpec& options);

nlohmann::json SplitToJson(const TrainTestSplit& split, const SplitSpec& options);

// bin(x) = floor(k * #{values < x} / n). Ties share a bin and the map is
// monotone; with distinct values every bin holds n/k values (±1).
std::vector<int> QuantileBin(std::span<const double> column, int k);

// Synthetic stand-in for the landslide benchmark: default schema, balanced
// classes, label signal planted only in the nine `SignalFeatures()`.
DataTable MakeSurrogate(uint64_t seed, size_t rows_per_class = 196);
std::vector<std::string> SignalFeatures();
std::vector<std::string> NoiseFeatures();

}  // namespace slidex::dataset

#endif  // SLIDEX_DATASET_H_
