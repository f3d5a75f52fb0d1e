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

// Agent-based model of subjective raters.
//
// Items carry a true rating drawn from N(0, 1) and a binary discriminatory
// feature. Each rater has a personal threshold, a weight for the feature and
// a fixed private perception of every item:
//
//   perceived(rater, item) = N(true(item), perception_ambiguity^2)
//                            + bias_weight(rater) * feature(item)
//
// A vote is positive iff the perceived rating is strictly above the rater's
// threshold. A comparison is a draw when the perceived ratings differ by less
// than comparison_ambiguity and otherwise goes to the larger one. Spammers
// flip a fair coin for votes and for comparisons (never a draw).
//
// The majority-vote method asks votes_per_item distinct raters about each
// item. The comparison method samples pairs from the C(N, 2) pool, hands each
// to one random rater, replays the outcomes with Elo from 0 and labels an
// item positive iff its rating ends above 0.

#ifndef CROWDELO_SIMULATION_H_
#define CROWDELO_SIMULATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "crowdelo/dataset.h"
#include "crowdelo/elo.h"
#include "crowdelo/random.h"
#include "crowdelo/stats.h"

namespace crowdelo {

struct SimParams {
  int n_items = 512;
  int n_raters = 100;
  double perception_ambiguity = 0.5;
  double comparison_ambiguity = 0.5;
  double threshold_diversity = 0.5;
  double spam_fraction = 0.0;
  bool bias_enabled = false;
  double bias_beta_alpha = 2.0;
  double bias_beta_beta = 16.0;
  double feature_probability = 0.5;
  int votes_per_item = 3;
  std::int64_t n_comparisons = 3 * 512;
  EloConfig elo = EloConfig::SimulationPreset();
  std::uint64_t master_seed = 0;

  // Throws std::invalid_argument when a field is out of range.
  void Validate() const;

  std::int64_t MajorityTaskCount() const {
    return static_cast<std::int64_t>(votes_per_item) * n_items;
  }
  // Comparison tasks per majority-vote task -> number of comparisons.
  std::int64_t ComparisonsForRatio(double ratio) const;
};

struct ItemPopulation {
  Eigen::VectorXd true_ratings;
  LabelVector feature_flags;

  Eigen::Index size() const { return true_ratings.size(); }
  // Ground truth: true rating strictly above the population mean of 0.
  LabelVector TrueLabels() const { return true_ratings.array() > 0.0; }
};

struct RaterPopulation {
  Eigen::VectorXd thresholds;
  // Weight of the discriminatory feature, in [-1, 1]; 0 without bias.
  Eigen::VectorXd bias_weights;
  LabelVector spam_flags;
  // Roots of each rater's perception draws and spam coin flips.
  std::vector<std::uint64_t> perception_seeds;
  std::vector<std::uint64_t> spam_seeds;

  Eigen::Index size() const { return thresholds.size(); }
};

ItemPopulation SampleItems(const SimParams& params, std::uint64_t seed);
RaterPopulation SampleRaters(const SimParams& params, std::uint64_t seed);

// Memo of perceived ratings; once stored a value never changes.
class PerceptionCache {
 public:
  PerceptionCache() = default;
  PerceptionCache(Eigen::Index n_raters, Eigen::Index n_items);

  std::optional<double> Find(Eigen::Index rater, Eigen::Index item) const;
  void Store(Eigen::Index rater, Eigen::Index item, double value);
  std::size_t size() const { return stored_; }

 private:
  Eigen::MatrixXd values_;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> known_;
  std::size_t stored_ = 0;
};

// Populations plus the mutable state of one simulation run.
class Crowd {
 public:
  Crowd(const SimParams& params, ItemPopulation items, RaterPopulation raters);

  const ItemPopulation& items() const { return items_; }
  const RaterPopulation& raters() const { return raters_; }
  const PerceptionCache& cache() const { return cache_; }
  Eigen::Index n_items() const { return items_.size(); }
  Eigen::Index n_raters() const { return raters_.size(); }

  // Throws std::out_of_range on a bad index.
  double Perceive(Eigen::Index rater, Eigen::Index item);
  // True for a positive vote.
  bool CastVote(Eigen::Index rater, Eigen::Index item);
  // Outcome for item_a: 1, 0.5 or 0. Throws std::invalid_argument when
  // item_a == item_b.
  double Compare(Eigen::Index rater, Eigen::Index item_a, Eigen::Index item_b);

 private:
  bool SpamCoin(Eigen::Index rater);
  void CheckRater(Eigen::Index rater) const;
  void CheckItem(Eigen::Index item) const;

  double perception_ambiguity_;
  double comparison_ambiguity_;
  ItemPopulation items_;
  RaterPopulation raters_;
  PerceptionCache cache_;
  std::vector<SplitMix64> spam_streams_;
};

// Samples both populations for the run rooted at `run_seed`.
Crowd MakeCrowd(const SimParams& params, std::uint64_t run_seed);

LabelVector MajorityVoteLabels(Crowd& crowd, const SimParams& params,
                               std::uint64_t seed);

// `count` unordered pairs i < j drawn without replacement from the C(n, 2)
// pool; once the pool is exhausted a fresh pass begins.
std::vector<std::pair<Eigen::Index, Eigen::Index>> SamplePairs(
    Eigen::Index n_items, std::int64_t count, Rng& rng);

struct ComparisonRun {
  LabelVector labels;
  Eigen::VectorXd ratings;
  std::vector<IndexedMatch> matches;
  std::vector<Eigen::Index> raters;
};

ComparisonRun ComparisonLabels(Crowd& crowd, const SimParams& params,
                               std::uint64_t seed);

// 2TP / (2TP + FP + FN), or 1 when there are no positives anywhere.
double F1Positive(const LabelVector& predicted, const LabelVector& truth);

// Mean of (predicted - truth) over items with the feature, labels as 0/1.
// Throws std::invalid_argument when no item has the feature.
double BiasMetric(const LabelVector& predicted, const LabelVector& truth,
                  const LabelVector& feature_flags);

struct TrialResult {
  double f1_majority = 0.0;
  double f1_comparison = 0.0;
  // Unset when no item carries the feature.
  std::optional<double> bias_majority;
  std::optional<double> bias_comparison;
  LabelVector majority_labels;
  LabelVector comparison_labels;
  std::uint64_t seed = 0;

  double delta_f1() const { return f1_comparison - f1_majority; }
};

TrialResult RunTrial(const SimParams& params, std::uint64_t run_seed);

// Seed of run `run` in an ensemble rooted at `master_seed`.
std::uint64_t RunSeed(std::uint64_t master_seed, int run);

struct EnsembleSummary {
  int n_runs = 0;
  Estimate f1_majority;
  Estimate f1_comparison;
  Estimate delta_f1;
  std::optional<Estimate> bias_majority;
  std::optional<Estimate> bias_comparison;
  std::vector<TrialResult> runs;
};

// Throws std::invalid_argument when n_runs < 2.
EnsembleSummary RunEnsemble(const SimParams& params, int n_runs = 25);

enum class PairDesign { kRandomPairs, kAllPairs };
enum class RaterAssignment { kUniform, kBalanced };

struct DatasetDesign {
  PairDesign pairs = PairDesign::kAllPairs;
  // Number of times each pair is judged under kAllPairs.
  int replications = 1;
  // Number of records under kRandomPairs.
  std::int64_t n_records = 0;
  RaterAssignment assignment = RaterAssignment::kUniform;
};

struct SimulatedDataset {
  ComparisonDataset dataset;
  ItemPopulation items;
  RaterPopulation raters;
  std::vector<std::string> rater_ids;
};

std::string SimItemId(Eigen::Index item);
std::string SimRaterId(Eigen::Index rater);

// A rater-attributed comparison dataset from one simulated crowd.
SimulatedDataset SimulateDataset(const SimParams& params,
                                 const DatasetDesign& design,
                                 std::uint64_t seed);

}  // namespace crowdelo

#endif  // CROWDELO_SIMULATION_H_
