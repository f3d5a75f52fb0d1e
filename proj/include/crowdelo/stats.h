// Copyright 2026 The Crowdelo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CROWDELO_STATS_H_
#define CROWDELO_STATS_H_

#include <optional>
#include <span>

#include <Eigen/Core>

namespace crowdelo {

// Width of reported confidence intervals, in standard errors.
inline constexpr double kIntervalSigmas = 5.0;

// Mean with its standard error and the mean +/- kIntervalSigmas * sem band.
struct Estimate {
  double mean = 0.0;
  double sem = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int n = 0;
};

// Throws std::invalid_argument for fewer than two samples.
Estimate Summarize(Eigen::Ref<const Eigen::VectorXd> samples);

// Standard error of the mean; 0 for a single sample.
double StandardError(Eigen::Ref<const Eigen::VectorXd> samples);

// Sample linear correlation; nullopt when either series has zero variance.
// Throws std::invalid_argument on length mismatch or fewer than two points.
std::optional<double> PearsonCorrelation(Eigen::Ref<const Eigen::VectorXd> x,
                                         Eigen::Ref<const Eigen::VectorXd> y);

// Piecewise-linear interpolation of (xs, ys) at x, xs strictly increasing.
// Clamps to the end values outside [xs.front(), xs.back()].
double InterpolateLinear(std::span<const double> xs, std::span<const double> ys,
                         double x);

}  // namespace crowdelo

#endif  // CROWDELO_STATS_H_
