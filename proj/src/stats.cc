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

#include "crowdelo/stats.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crowdelo {

double StandardError(Eigen::Ref<const Eigen::VectorXd> samples) {
  const Eigen::Index n = samples.size();
  if (n < 2) return 0.0;
  const double mean = samples.mean();
  const double variance =
      (samples.array() - mean).square().sum() / static_cast<double>(n - 1);
  return std::sqrt(variance / static_cast<double>(n));
}

Estimate Summarize(Eigen::Ref<const Eigen::VectorXd> samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument(
        "at least two samples are needed for a standard error");
  }
  Estimate estimate;
  estimate.n = static_cast<int>(samples.size());
  estimate.mean = samples.mean();
  estimate.sem = StandardError(samples);
  estimate.lower = estimate.mean - kIntervalSigmas * estimate.sem;
  estimate.upper = estimate.mean + kIntervalSigmas * estimate.sem;
  return estimate;
}

std::optional<double> PearsonCorrelation(Eigen::Ref<const Eigen::VectorXd> x,
                                         Eigen::Ref<const Eigen::VectorXd> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("correlation of series of unequal length");
  }
  if (x.size() < 2) {
    throw std::invalid_argument("correlation needs at least two points");
  }
  const Eigen::ArrayXd dx = x.array() - x.mean();
  const Eigen::ArrayXd dy = y.array() - y.mean();
  const double sxx = dx.square().sum();
  const double syy = dy.square().sum();
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  const double r = (dx * dy).sum() / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double InterpolateLinear(std::span<const double> xs, std::span<const double> ys,
                         double x) {
  if (xs.empty() || xs.size() != ys.size()) {
    throw std::invalid_argument("interpolation needs matching, non-empty knots");
  }
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto upper = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(upper - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

}  // namespace crowdelo
