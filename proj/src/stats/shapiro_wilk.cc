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
#include <cmath>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "slidex/error.h"
#include "slidex/stats.h"

namespace slidex::stats {
namespace {

// c[0] + c[1] x + c[2] x^2 + ...
template <size_t N>
double Poly(const double (&c)[N], double x) {
  double result = 0.0;
  for (size_t i = N; i-- > 0;) result = result * x + c[i];
  return result;
}

constexpr double kC1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
constexpr double kC2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
constexpr double kC3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
constexpr double kC4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
constexpr double kC5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
constexpr double kC6[] = {-0.4803, -0.082676, 0.0030302};
constexpr double kG[] = {-2.273, 0.459};

// Upper half of the antisymmetric coefficient vector: a[0] pairs with the
// largest order statistic.
std::vector<double> Coefficients(size_t n) {
  const size_t half = n / 2;
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
    return a;
  }
  const boost::math::normal_distribution<double> normal;
  std::vector<double> m(half);
  double sum_m2 = 0.0;
  for (size_t i = 0; i < half; ++i) {
    m[i] = boost::math::quantile(normal, (i + 1 - 0.375) / (n + 0.25));
    sum_m2 += m[i] * m[i];
  }
  sum_m2 *= 2.0;
  const double norm_m = std::sqrt(sum_m2);
  const double rsn = 1.0 / std::sqrt(static_cast<double>(n));
  const double a1 = Poly(kC1, rsn) - m[0] / norm_m;

  size_t first_scaled;
  double fac;
  if (n > 5) {
    first_scaled = 2;
    const double a2 = -m[1] / norm_m + Poly(kC2, rsn);
    fac = std::sqrt((sum_m2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                    (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[1] = a2;
  } else {
    first_scaled = 1;
    fac = std::sqrt((sum_m2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
  }
  a[0] = a1;
  for (size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  return a;
}

}  // namespace

NormalityReport ShapiroWilk(std::span<const double> sample) {
  const size_t n = sample.size();
  if (n < 3 || n > 5000) {
    throw Error(ErrorCode::kSampleSizeOutOfRange,
                "Shapiro-Wilk needs 3..5000 values, got " + std::to_string(n));
  }
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 0.0)) {
    throw Error(ErrorCode::kConstantSample, "sample is constant");
  }

  // Scale by the range before forming sums; keeps W affine-invariant to
  // rounding level.
  const double lo = x.front();
  double mean = 0.0;
  for (double& v : x) v = (v - lo) / range;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);

  const auto a = Coefficients(n);
  double sax = 0.0, ssa = 0.0, ssx = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double ai = 0.0;
    if (i < n / 2) {
      ai = -a[i];
    } else if (n - 1 - i < n / 2) {
      ai = a[n - 1 - i];
    }
    const double dx = x[i] - mean;
    sax += ai * dx;
    ssa += ai * ai;
    ssx += dx * dx;
  }
  double w = sax * sax / (ssa * ssx);
  w = std::min(w, 1.0);

  NormalityReport report;
  report.w_statistic = w;
  report.n = n;

  if (n == 3) {
    constexpr double kSixOverPi = 1.90985931710274;
    constexpr double kPiOverThree = 1.04719755119660;
    report.p_value =
        std::clamp(kSixOverPi * (std::asin(std::sqrt(w)) - kPiOverThree), 0.0, 1.0);
    return report;
  }

  const double an = static_cast<double>(n);
  double y = std::log1p(-w);
  double mu, sigma;
  if (n <= 11) {
    const double gamma = Poly(kG, an);
    if (y >= gamma) {
      report.p_value = 1e-99;
      return report;
    }
    y = -std::log(gamma - y);
    mu = Poly(kC3, an);
    sigma = std::exp(Poly(kC4, an));
  } else {
    const double ln_n = std::log(an);
    mu = Poly(kC5, ln_n);
    sigma = std::exp(Poly(kC6, ln_n));
  }
  const boost::math::normal_distribution<double> dist(mu, sigma);
  report.p_value = std::clamp(boost::math::cdf(boost::math::complement(dist, y)), 0.0, 1.0);
  return report;
}

}  // namespace slidex::stats
