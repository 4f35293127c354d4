//
// Copyright 2026 The xlp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "xlp/stats.h"
#include "str_util.h"

#include <algorithm>
#include <cmath>
#include <limits>


namespace xlp {
namespace {

constexpr double kTolerance = 1e-10;
constexpr int kMaxIterations = 10000;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b) evaluated with the modified Lentz method.
double BetaContinuedFraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    // Even step.
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    // Odd step.
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kTolerance * 1e-3) break;
  }
  return h;
}

}  // namespace

double RegularizedIncompleteBeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The fraction converges fastest for x below the mean; use the symmetry
  // I_x(a, b) = 1 - I_{1-x}(b, a) otherwise.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * BetaContinuedFraction(a, b, x) / a;
  }
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

double StudentTTwoTailedP(double t, double df) {
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return RegularizedIncompleteBeta(0.5 * df, 0.5, x);
}

absl::StatusOr<TTestResult> PairedTTest(std::span<const double> baseline,
                                        std::span<const double> perturbed) {
  if (baseline.size() != perturbed.size()) {
    return absl::InvalidArgumentError(
        StrCat("paired t-test needs equal lengths, got ",
                     baseline.size(), " and ", perturbed.size()));
  }
  const std::size_t n = baseline.size();
  if (n < 2) {
    return absl::InvalidArgumentError("paired t-test needs at least 2 pairs");
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += perturbed[i] - baseline[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (perturbed[i] - baseline[i]) - mean;
    ss += r * r;
  }
  const double variance = ss / static_cast<double>(n - 1);
  // Differences that agree up to rounding of the inputs count as constant.
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    scale = std::max(scale, std::fabs(perturbed[i] - baseline[i]));
  }
  if (!(variance > 0.0) ||
      std::sqrt(variance) <= 64 * std::numeric_limits<double>::epsilon() *
                                 std::max(scale, 1.0)) {
    return absl::InvalidArgumentError(
        "paired differences have zero variance; t is undefined");
  }
  TTestResult result;
  result.mean_delta = mean;
  result.degrees_of_freedom = static_cast<int>(n - 1);
  result.t_statistic =
      mean / (std::sqrt(variance) / std::sqrt(static_cast<double>(n)));
  result.p_value =
      StudentTTwoTailedP(result.t_statistic, result.degrees_of_freedom);
  return result;
}

}  // namespace xlp
