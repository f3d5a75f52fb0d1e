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

// How labelling quality grows with the number of comparisons, and how that
// growth depends on the number of items N.
//
// A trajectory samples record subsets of increasing size, rates each subset,
// splits the items at the median rating and scores the labels against a
// reference labelling. Trajectories for several N collapse onto one curve
// when the comparison count is divided by the right function of N; the
// collapse gap measures how well a candidate law does that. A pilot
// trajectory then predicts the comparison budget for a larger study.

#ifndef CROWDELO_SCALING_H_
#define CROWDELO_SCALING_H_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crowdelo/dataset.h"
#include "crowdelo/elo.h"

namespace crowdelo {

enum class ScalingLaw { kLinear, kNLogN, kQuadratic };

inline constexpr ScalingLaw kAllScalingLaws[] = {
    ScalingLaw::kLinear, ScalingLaw::kNLogN, ScalingLaw::kQuadratic};

// f(N) for the law; N log N uses the natural logarithm.
double ScaleFactor(ScalingLaw law, double system_size);
std::string_view ScalingLawName(ScalingLaw law);

struct TrajectoryPoint {
  std::int64_t n_comparisons = 0;
  double mean_f1 = 0.0;
  double sem = 0.0;
  int n_replicates = 0;
};

struct ScalingTrajectory {
  int system_size = 0;
  // Strictly increasing in n_comparisons.
  std::vector<TrajectoryPoint> points;
};

// Median split of the ratings from all records, replayed with the canonical
// seed. Aligned with dataset.items. Throws std::invalid_argument when the
// dataset has no records.
LabelVector BenchmarkLabels(const ComparisonDataset& dataset,
                            const EloConfig& config);

// Full-data ratings behind BenchmarkLabels, aligned with dataset.items.
RatingTable BenchmarkRatings(const ComparisonDataset& dataset,
                             const EloConfig& config);

// For each count, `replicates` uniform subsets of the records (kept in
// dataset order) are replayed with the canonical seed, median-split and
// scored with F1Positive against `reference` (aligned with dataset.items).
// Throws std::invalid_argument when a count exceeds the record count, the
// counts are not strictly increasing, or replicates < 1.
ScalingTrajectory Trajectory(const ComparisonDataset& dataset,
                             const LabelVector& reference,
                             const std::vector<std::int64_t>& counts,
                             int replicates, const EloConfig& config,
                             std::uint64_t seed);

// Same, scored against BenchmarkLabels(dataset, config).
ScalingTrajectory Trajectory(const ComparisonDataset& dataset,
                             const std::vector<std::int64_t>& counts,
                             int replicates, const EloConfig& config,
                             std::uint64_t seed);

// System size N out of a larger dataset: each replicate draws N items,
// drops the records touching other items, and scores against the median
// split of `full_ratings` within the drawn subset.
ScalingTrajectory SubsetTrajectory(const ComparisonDataset& dataset,
                                   const RatingTable& full_ratings,
                                   int system_size,
                                   const std::vector<std::int64_t>& counts,
                                   int replicates, const EloConfig& config,
                                   std::uint64_t seed);

struct CollapseReport {
  ScalingLaw law = ScalingLaw::kNLogN;
  // Per trajectory: (n / f(N), mean f1).
  std::vector<std::vector<std::pair<double, double>>> rescaled;
  double domain_lower = 0.0;
  double domain_upper = 0.0;
  // Knots of every curve inside the common domain.
  std::vector<double> grid;
  // Max minus min across curves at each grid point.
  std::vector<double> spread;
  // Mean across curves at each grid point.
  std::vector<double> mean;
  double gap = 0.0;
};

// Throws std::invalid_argument for fewer than two trajectories, an empty
// trajectory, or rescaled domains that do not overlap.
CollapseReport CollapseScore(const std::vector<ScalingTrajectory>& trajectories,
                             ScalingLaw law);

// Largest spread over grid points whose cross-curve mean lies in
// [f1_lower, f1_upper]. Throws std::invalid_argument when no point does.
double WindowedGap(const CollapseReport& report, double f1_lower,
                   double f1_upper);

// Comparisons needed for `target_f1` with `target_size` items, read off the
// first crossing of the pilot's N log N-rescaled curve. Throws
// std::invalid_argument for a target outside (0, 1] or sizes below 2, and
// std::domain_error when the pilot never reaches the target.
std::int64_t EstimateBudget(const ScalingTrajectory& pilot, int pilot_size,
                            double target_f1, int target_size);

// Smallest rescaled x at which the pilot reaches target_f1.
double CrossingPoint(const ScalingTrajectory& pilot, int pilot_size,
                     double target_f1);

// Answers whether `probe` ranks above `benchmark_item`.
using ComparisonOracle = std::function<bool(const std::string& probe,
                                            const std::string& benchmark_item)>;

struct ProbePlacement {
  std::string item;
  double baseline_rating = 0.0;
  // Number of benchmark items the probe ranks above.
  std::size_t position = 0;
  double implied_rating = 0.0;
};

struct AnchorResult {
  double offset = 0.0;
  double median_gap = 0.0;
  std::vector<ProbePlacement> probes;
  RatingTable anchored;
};

// Moves a separately rated baseline group onto the benchmark's scale. The
// probes_per_bucket baseline items closest to the baseline mean are binary
// searched into the benchmark's rating order; a probe between two items is
// implied to sit at their midpoint, one past either end sits one median gap
// beyond it. The baseline is shifted by the mean implied-minus-own rating.
AnchorResult AnchorGroups(const RatingTable& baseline,
                          const RatingTable& benchmark, int probes_per_bucket,
                          const ComparisonOracle& oracle);

}  // namespace crowdelo

#endif  // CROWDELO_SCALING_H_
