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
#include <array>
#include <cmath>

#include "slidex/dataset.h"
#include "slidex/random.h"

namespace slidex::dataset {
namespace {

// Location shift of the latent standard-normal score between the two
// classes, per signal feature (negative: larger raw value is safer).
struct Signal {
  const char* name;
  double shift;
};

constexpr std::array<Signal, 8> kContinuousSignals = {{
    {"SLOPE", 1.10},
    {"ELEVATION", 0.90},
    {"ROAD", -0.90},
    {"TWI", -0.80},
    {"PROFILE", 0.40},
    {"CHANGE", 0.40},
    {"DRAINAGE", -0.35},
    {"RAINFALL", 0.35},
}};

// Maps a latent score onto a plausible raw range for the factor.
double ToRaw(const std::string& name, double z) {
  if (name == "SLOPE") return std::max(0.0, 22.0 + 9.0 * z);
  if (name == "ELEVATION") return 60.0 * std::exp(0.6 * z);
  if (name == "ROAD") return 400.0 * std::exp(0.8 * z);
  if (name == "TWI") return 7.0 + 2.0 * z;
  if (name == "PROFILE") return 0.01 * z;
  if (name == "PLAN") return 0.01 * z;
  if (name == "CHANGE") return std::round(std::clamp(3.0 + 1.2 * z, 1.0, 6.0));
  if (name == "DRAINAGE") return 250.0 * std::exp(0.7 * z);
  if (name == "RAINFALL") return 2800.0 + 120.0 * z;
  if (name == "ASPECT") return 180.0 + 100.0 * std::tanh(z);
  if (name == "SPI") return std::exp(1.5 * z);
  if (name == "NDVI") return std::tanh(0.4 + 0.5 * z);
  if (name == "FAULTLINES") return 3000.0 * std::exp(0.9 * z);
  return z;
}

// Draws a class code in 1..weights.size() from unnormalized weights.
int DrawCode(Rng& rng, std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = rng.Uniform() * total;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return static_cast<int>(i) + 1;
    u -= weights[i];
  }
  return static_cast<int>(weights.size());
}

}  // namespace

std::vector<std::string> SignalFeatures() {
  return {"PROFILE", "CHANGE", "ELEVATION", "SLOPE", "TWI",
          "DRAINAGE", "RAINFALL", "ROAD", "GEOLOGY"};
}

std::vector<std::string> NoiseFeatures() {
  return {"PLAN", "LANDUSE", "ASPECT", "SPI", "NDVI", "FAULTLINES"};
}

DataTable MakeSurrogate(uint64_t seed, size_t rows_per_class) {
  const FeatureSchema schema = FeatureSchema::Default();
  Rng rng(DeriveSeed(seed, {0x5a11}));
  const size_t n = 2 * rows_per_class;
  std::vector<double> values;
  values.reserve(n * schema.size());
  std::vector<int> labels;
  labels.reserve(n);

  constexpr std::array<double, 6> kGeologySafe = {4, 3, 2, 1, 1, 1};
  constexpr std::array<double, 6> kGeologyProne = {1, 1, 2, 3, 3, 2};
  constexpr std::array<double, 5> kLanduse = {3, 2, 2, 1, 1};

  for (size_t i = 0; i < n; ++i) {
    const int y = i % 2 == 0 ? 1 : 0;
    const double sign = y == 1 ? 0.5 : -0.5;
    for (const auto& name : schema.names()) {
      double v;
      if (name == "GEOLOGY") {
        v = DrawCode(rng, y == 1 ? std::span<const double>(kGeologyProne)
                                 : std::span<const double>(kGeologySafe));
      } else if (name == "LANDUSE") {
        v = DrawCode(rng, kLanduse);
      } else {
        double shift = 0.0;
        for (const auto& s : kContinuousSignals) {
          if (name == s.name) shift = s.shift;
        }
        v = ToRaw(name, shift * sign * 2.0 + rng.Normal());
      }
      values.push_back(v);
    }
    labels.push_back(y);
  }
  return DataTable(schema, std::move(values), std::move(labels));
}

}  // namespace slidex::dataset
