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

#ifndef SLIDEX_TESTS_TEST_UTIL_H_
#define SLIDEX_TESTS_TEST_UTIL_H_

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "slidex/dataset.h"
#include "slidex/error.h"
#include "slidex/random.h"

namespace slidex::testing {

inline std::vector<std::string> Names(size_t m) {
  std::vector<std::string> names;
  for (size_t i = 0; i < m; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

inline dataset::DataTable Table(const std::vector<std::vector<double>>& rows,
                                const std::vector<int>& labels) {
  const size_t m = rows.empty() ? 0 : rows.front().size();
  std::vector<double> values;
  for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
  return dataset::DataTable(dataset::FeatureSchema(Names(m), "y"), values, labels);
}

// Two Gaussian-free clusters split by the hyperplane x0 + x1 = 0 with a
// margin of at least `gap` on each side.
inline dataset::DataTable Separable(uint64_t seed, size_t n, size_t m = 2, double gap = 0.5) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  while (rows.size() < n) {
    std::vector<double> x(m);
    for (auto& v : x) v = rng.Uniform(-3.0, 3.0);
    const double s = x[0] + x[1];
    if (std::abs(s) < gap) continue;
    rows.push_back(x);
    labels.push_back(s > 0 ? 1 : 0);
  }
  return Table(rows, labels);
}

// Points at the four corners of the unit square labelled by XOR. The
// default counts are unequal so that the first axis split has some gain;
// equal counts make every single split worthless.
inline dataset::DataTable XorCorners(std::array<int, 4> counts = {30, 20, 25, 25}) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  const double corners[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < counts[c]; ++i) {
      rows.push_back({corners[c][0], corners[c][1]});
      labels.push_back(static_cast<int>(corners[c][0]) ^ static_cast<int>(corners[c][1]));
    }
  }
  return Table(rows, labels);
}

// Continuous XOR: uniform points in [-1, 1]^2 away from the axes, label
// set when the coordinates have opposite signs.
inline dataset::DataTable XorCloud(uint64_t seed, size_t n) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  while (rows.size() < n) {
    const double a = rng.Uniform(-1.0, 1.0), b = rng.Uniform(-1.0, 1.0);
    if (std::abs(a) < 0.05 || std::abs(b) < 0.05) continue;
    rows.push_back({a, b});
    labels.push_back((a > 0) != (b > 0) ? 1 : 0);
  }
  return Table(rows, labels);
}

template <typename F>
ErrorCode CodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidArgument;
}

}  // namespace slidex::testing

#endif  // SLIDEX_TESTS_TEST_UTIL_H_
