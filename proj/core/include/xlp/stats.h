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

#ifndef XLP_STATS_H_
#define XLP_STATS_H_

#include <span>

#include "absl/status/statusor.h"

namespace xlp {

// I_x(a, b) by Lentz's continued fraction, absolute tolerance 1e-10.
double RegularizedIncompleteBeta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double StudentTTwoTailedP(double t, double df);

struct TTestResult {
  double t_statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
  double mean_delta = 0.0;
};

// Paired two-tailed t-test on d_i = perturbed_i - baseline_i using the
// sample standard deviation. Fails for n < 2, unequal lengths or zero
// variance of the differences.
absl::StatusOr<TTestResult> PairedTTest(std::span<const double> baseline,
                                        std::span<const double> perturbed);

}  // namespace xlp

#endif  // XLP_STATS_H_
