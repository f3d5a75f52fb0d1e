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

#include "crowdelo/scaling.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "crowdelo/random.h"
#include "crowdelo/simulation.h"
#include "crowdelo/stats.h"

namespace crowdelo {
namespace {

void CheckCounts(const std::vector<std::int64_t>& counts,
                 std::size_t n_records, int replicates) {
  if (replicates < 1) {
    throw std::invalid_argument("replicates must be at least 1");
  }
  if (counts.empty()) {
    throw std::invalid_argument("no comparison counts requested");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 1) {
      throw std::invalid_argument("comparison counts must be positive");
    }
    if (i > 0 && counts[i] <= counts[i - 1]) {
      throw std::invalid_argument(
          "comparison counts must be strictly increasing");
    }
    if (static_cast<std::size_t>(counts[i]) > n_records) {
      throw std::invalid_argument(
          "comparison count " + std::to_string(counts[i]) +
          " exceeds the " + std::to_string(n_records) + " available records");
    }
  }
}

// Records as dense-index matches over `items`.
std::vector<IndexedMatch> IndexDataset(const ComparisonDataset& dataset) {
  std::unordered_map<std::string, Eigen::Index> index;
  for (std::size_t i = 0; i < dataset.items.size(); ++i) {
    index.emplace(dataset.items[i], static_cast<Eigen::Index>(i));
  }
  std::vector<IndexedMatch> matches;
  matches.reserve(dataset.records.size());
  for (const MatchRecord& record : dataset.records) {
    record.Validate();
    auto a = index.find(record.item_a);
    auto b = index.find(record.item_b);
    if (a == index.end() || b == index.end()) {
      throw std::invalid_argument("record mentions an item outside the "
                                  "dataset's universe");
    }
    matches.push_back({a->second, b->second, record.score_a});
  }
  return matches;
}

// F1 of the median split of a subsample of `matches` against `reference`.
double ScoreSubsample(std::span<const IndexedMatch> matches,
                      std::vector<std::int64_t> picks, Eigen::Index n_items,
                      const LabelVector& reference, const EloConfig& config) {
  std::sort(picks.begin(), picks.end());
  std::vector<IndexedMatch> subset;
  subset.reserve(picks.size());
  for (std::int64_t k : picks) subset.push_back(matches[k]);
  Eigen::VectorXd ratings =
      Eigen::VectorXd::Constant(n_items, config.default_rating);
  ReplayIndexedMatches(subset, config, kCanonicalReplaySeed, ratings);
  return F1Positive(BinarizeByMedian(ratings), reference);
}

TrajectoryPoint Summarise(std::int64_t count, const Eigen::VectorXd& scores) {
  TrajectoryPoint point;
  point.n_comparisons = count;
  point.mean_f1 = scores.mean();
  point.sem = StandardError(scores);
  point.n_replicates = static_cast<int>(scores.size());
  return point;
}

std::uint64_t ReplicateSeed(std::uint64_t seed, std::size_t count_index,
                            int replicate) {
  return DeriveSeed(DeriveSeed(seed, kSubsampleTag, count_index), kRunTag,
                    static_cast<std::uint64_t>(replicate));
}

}  // namespace

double ScaleFactor(ScalingLaw law, double system_size) {
  switch (law) {
    case ScalingLaw::kLinear:
      return system_size;
    case ScalingLaw::kNLogN:
      return system_size * std::log(system_size);
    case ScalingLaw::kQuadratic:
      return system_size * system_size;
  }
  return system_size;
}

std::string_view ScalingLawName(ScalingLaw law) {
  switch (law) {
    case ScalingLaw::kLinear:
      return "N";
    case ScalingLaw::kNLogN:
      return "NlogN";
    case ScalingLaw::kQuadratic:
      return "N^2";
  }
  return "?";
}

RatingTable BenchmarkRatings(const ComparisonDataset& dataset,
                             const EloConfig& config) {
  if (dataset.records.empty()) {
    throw std::invalid_argument("benchmark needs a non-empty dataset");
  }
  return ReplayEpochs(dataset.records, config, kCanonicalReplaySeed,
                      dataset.items);
}

LabelVector BenchmarkLabels(const ComparisonDataset& dataset,
                            const EloConfig& config) {
  const RatingTable table = BenchmarkRatings(dataset, config);
  // ReplayEpochs registers the universe first, so table order is item order
  // unless records mention items outside it.
  if (table.size() != dataset.items.size()) {
    throw std::invalid_argument("records mention items outside the universe");
  }
  return BinarizeByMedian(table.ratings());
}

ScalingTrajectory Trajectory(const ComparisonDataset& dataset,
                             const LabelVector& reference,
                             const std::vector<std::int64_t>& counts,
                             int replicates, const EloConfig& config,
                             std::uint64_t seed) {
  config.Validate();
  CheckCounts(counts, dataset.records.size(), replicates);
  if (reference.size() != static_cast<Eigen::Index>(dataset.items.size())) {
    throw std::invalid_argument("reference labels do not match the items");
  }
  const std::vector<IndexedMatch> matches = IndexDataset(dataset);
  const auto n_items = static_cast<Eigen::Index>(dataset.items.size());
  const auto n_records = static_cast<std::int64_t>(matches.size());

  ScalingTrajectory trajectory;
  trajectory.system_size = static_cast<int>(n_items);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    Eigen::VectorXd scores(replicates);
    for (int r = 0; r < replicates; ++r) {
      Rng rng(ReplicateSeed(seed, c, r));
      scores[r] = ScoreSubsample(matches,
                                 SampleDistinct(n_records, counts[c], rng),
                                 n_items, reference, config);
    }
    trajectory.points.push_back(Summarise(counts[c], scores));
  }
  return trajectory;
}

ScalingTrajectory Trajectory(const ComparisonDataset& dataset,
                             const std::vector<std::int64_t>& counts,
                             int replicates, const EloConfig& config,
                             std::uint64_t seed) {
  return Trajectory(dataset, BenchmarkLabels(dataset, config), counts,
                    replicates, config, seed);
}

ScalingTrajectory SubsetTrajectory(const ComparisonDataset& dataset,
                                   const RatingTable& full_ratings,
                                   int system_size,
                                   const std::vector<std::int64_t>& counts,
                                   int replicates, const EloConfig& config,
                                   std::uint64_t seed) {
  config.Validate();
  const auto universe = static_cast<std::int64_t>(dataset.items.size());
  if (system_size < 2 || system_size > universe) {
    throw std::invalid_argument("system size must lie in [2, " +
                                std::to_string(universe) + "]");
  }
  if (replicates < 1) {
    throw std::invalid_argument("replicates must be at least 1");
  }

  // Each replicate owns an item subset; every count reuses the same subsets.
  struct Subset {
    std::vector<IndexedMatch> matches;
    LabelVector reference;
  };
  std::vector<Subset> subsets;
  for (int r = 0; r < replicates; ++r) {
    Rng rng(DeriveSeed(seed, kSubsetTag, static_cast<std::uint64_t>(r)));
    std::vector<std::int64_t> picks =
        SampleDistinct(universe, system_size, rng);
    std::sort(picks.begin(), picks.end());
    std::vector<std::string> items;
    Eigen::VectorXd full(system_size);
    for (std::size_t i = 0; i < picks.size(); ++i) {
      items.push_back(dataset.items[static_cast<std::size_t>(picks[i])]);
      full[static_cast<Eigen::Index>(i)] = full_ratings.Rating(items.back());
    }
    const ComparisonDataset restricted = RestrictToItems(dataset, items);
    CheckCounts(counts, restricted.records.size(), replicates);
    subsets.push_back({IndexDataset(restricted), BinarizeByMedian(full)});
  }

  ScalingTrajectory trajectory;
  trajectory.system_size = system_size;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    Eigen::VectorXd scores(replicates);
    for (int r = 0; r < replicates; ++r) {
      const Subset& subset = subsets[static_cast<std::size_t>(r)];
      Rng rng(ReplicateSeed(seed, c, r));
      scores[r] = ScoreSubsample(
          subset.matches,
          SampleDistinct(static_cast<std::int64_t>(subset.matches.size()),
                         counts[c], rng),
          system_size, subset.reference, config);
    }
    trajectory.points.push_back(Summarise(counts[c], scores));
  }
  return trajectory;
}

CollapseReport CollapseScore(const std::vector<ScalingTrajectory>& trajectories,
                             ScalingLaw law) {
  if (trajectories.size() < 2) {
    throw std::invalid_argument("collapse needs at least two trajectories");
  }
  CollapseReport report;
  report.law = law;
  report.domain_lower = -std::numeric_limits<double>::infinity();
  report.domain_upper = std::numeric_limits<double>::infinity();

  std::vector<std::vector<double>> xs;
  std::vector<std::vector<double>> ys;
  for (const ScalingTrajectory& trajectory : trajectories) {
    if (trajectory.points.empty()) {
      throw std::invalid_argument("empty trajectory");
    }
    if (trajectory.system_size < 2) {
      throw std::invalid_argument("trajectory system size must be >= 2");
    }
    const double scale = ScaleFactor(law, trajectory.system_size);
    std::vector<std::pair<double, double>> curve;
    std::vector<double> x;
    std::vector<double> y;
    for (const TrajectoryPoint& point : trajectory.points) {
      x.push_back(static_cast<double>(point.n_comparisons) / scale);
      y.push_back(point.mean_f1);
      curve.emplace_back(x.back(), y.back());
    }
    report.domain_lower = std::max(report.domain_lower, x.front());
    report.domain_upper = std::min(report.domain_upper, x.back());
    report.rescaled.push_back(std::move(curve));
    xs.push_back(std::move(x));
    ys.push_back(std::move(y));
  }
  if (report.domain_lower > report.domain_upper) {
    throw std::invalid_argument("rescaled trajectories do not overlap");
  }

  // The spread of piecewise-linear curves peaks at a knot of some curve.
  report.grid = {report.domain_lower, report.domain_upper};
  for (const std::vector<double>& x : xs) {
    for (double knot : x) {
      if (knot > report.domain_lower && knot < report.domain_upper) {
        report.grid.push_back(knot);
      }
    }
  }
  std::sort(report.grid.begin(), report.grid.end());
  report.grid.erase(std::unique(report.grid.begin(), report.grid.end()),
                    report.grid.end());

  for (double g : report.grid) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t t = 0; t < xs.size(); ++t) {
      const double value = InterpolateLinear(xs[t], ys[t], g);
      lo = std::min(lo, value);
      hi = std::max(hi, value);
      sum += value;
    }
    report.spread.push_back(hi - lo);
    report.mean.push_back(sum / static_cast<double>(xs.size()));
  }
  report.gap = *std::max_element(report.spread.begin(), report.spread.end());
  return report;
}

double WindowedGap(const CollapseReport& report, double f1_lower,
                   double f1_upper) {
  double gap = -1.0;
  for (std::size_t i = 0; i < report.grid.size(); ++i) {
    if (report.mean[i] >= f1_lower && report.mean[i] <= f1_upper) {
      gap = std::max(gap, report.spread[i]);
    }
  }
  if (gap < 0.0) {
    throw std::invalid_argument("no grid point has a mean f1 in the window");
  }
  return gap;
}

double CrossingPoint(const ScalingTrajectory& pilot, int pilot_size,
                     double target_f1) {
  if (!(target_f1 > 0.0 && target_f1 <= 1.0)) {
    throw std::invalid_argument("target f1 must lie in (0, 1]");
  }
  if (pilot_size < 2) throw std::invalid_argument("pilot size must be >= 2");
  if (pilot.points.empty()) throw std::invalid_argument("empty pilot");
  const double scale = ScaleFactor(ScalingLaw::kNLogN, pilot_size);
  const auto& points = pilot.points;
  if (points.front().mean_f1 >= target_f1) {
    return static_cast<double>(points.front().n_comparisons) / scale;
  }
  for (std::size_t k = 1; k < points.size(); ++k) {
    if (points[k].mean_f1 >= target_f1) {
      const double x0 = static_cast<double>(points[k - 1].n_comparisons);
      const double x1 = static_cast<double>(points[k].n_comparisons);
      const double y0 = points[k - 1].mean_f1;
      const double y1 = points[k].mean_f1;
      return (x0 + (target_f1 - y0) / (y1 - y0) * (x1 - x0)) / scale;
    }
  }
  throw std::domain_error("the pilot trajectory never reaches f1 = " +
                          std::to_string(target_f1));
}

std::int64_t EstimateBudget(const ScalingTrajectory& pilot, int pilot_size,
                            double target_f1, int target_size) {
  if (target_size < 2) throw std::invalid_argument("target size must be >= 2");
  const double crossing = CrossingPoint(pilot, pilot_size, target_f1);
  const double budget = crossing * ScaleFactor(ScalingLaw::kNLogN, target_size);
  // Absorb the rounding of the rescale/unscale round trip before the ceiling.
  return static_cast<std::int64_t>(std::ceil(budget * (1.0 - 1e-12)));
}

AnchorResult AnchorGroups(const RatingTable& baseline,
                          const RatingTable& benchmark, int probes_per_bucket,
                          const ComparisonOracle& oracle) {
  if (baseline.empty()) throw std::invalid_argument("empty baseline group");
  if (benchmark.empty()) throw std::invalid_argument("empty benchmark group");
  if (probes_per_bucket < 1) {
    throw std::invalid_argument("probes_per_bucket must be positive");
  }
  if (!oracle) throw std::invalid_argument("no comparison oracle");

  // Benchmark in ascending rating order, ties by id.
  std::vector<std::size_t> order(benchmark.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const Eigen::VectorXd& bench = benchmark.ratings();
  const auto& bench_items = benchmark.items();
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    if (bench[l] != bench[r]) return bench[l] < bench[r];
    return bench_items[l] < bench_items[r];
  });
  std::vector<double> sorted;
  for (std::size_t i : order) sorted.push_back(bench[i]);

  AnchorResult result;
  if (sorted.size() >= 2) {
    Eigen::VectorXd gaps(static_cast<Eigen::Index>(sorted.size() - 1));
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      gaps[static_cast<Eigen::Index>(i - 1)] = sorted[i] - sorted[i - 1];
    }
    result.median_gap = Median(gaps);
  }

  // Probes: the baseline items closest to the baseline mean.
  const Eigen::VectorXd& base = baseline.ratings();
  const auto& base_items = baseline.items();
  const double mean = base.mean();
  std::vector<std::size_t> candidates(baseline.size());
  std::iota(candidates.begin(), candidates.end(), std::size_t{0});
  std::sort(candidates.begin(), candidates.end(),
            [&](std::size_t l, std::size_t r) {
              const double dl = std::abs(base[l] - mean);
              const double dr = std::abs(base[r] - mean);
              if (dl != dr) return dl < dr;
              return base_items[l] < base_items[r];
            });
  candidates.resize(
      std::min(candidates.size(), static_cast<std::size_t>(probes_per_bucket)));

  double total_shift = 0.0;
  for (std::size_t c : candidates) {
    ProbePlacement placement;
    placement.item = base_items[c];
    placement.baseline_rating = base[c];
    std::size_t lo = 0;
    std::size_t hi = sorted.size();
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (oracle(placement.item, bench_items[order[mid]])) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    placement.position = lo;
    if (lo == 0) {
      placement.implied_rating = sorted.front() - result.median_gap;
    } else if (lo == sorted.size()) {
      placement.implied_rating = sorted.back() + result.median_gap;
    } else {
      placement.implied_rating = 0.5 * (sorted[lo - 1] + sorted[lo]);
    }
    total_shift += placement.implied_rating - placement.baseline_rating;
    result.probes.push_back(std::move(placement));
  }
  result.offset = total_shift / static_cast<double>(result.probes.size());
  result.anchored = baseline;
  result.anchored.mutable_ratings().array() += result.offset;
  return result;
}

}  // namespace crowdelo
