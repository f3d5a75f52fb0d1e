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

#include "crowdelo/simulation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace crowdelo {
namespace {

bool IsProbability(double p) { return p >= 0.0 && p <= 1.0; }

std::int64_t PairCount(Eigen::Index n) {
  return static_cast<std::int64_t>(n) * (n - 1) / 2;
}

// Index k of the row-major enumeration of pairs i < j.
std::pair<Eigen::Index, Eigen::Index> DecodePair(Eigen::Index n,
                                                 std::int64_t k) {
  // Row i starts at i * (2n - i - 1) / 2.
  auto row_start = [n](std::int64_t i) { return i * (2 * n - i - 1) / 2; };
  std::int64_t lo = 0;
  std::int64_t hi = n - 2;
  while (lo < hi) {
    const std::int64_t mid = (lo + hi + 1) / 2;
    if (row_start(mid) <= k) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  const std::int64_t j = lo + 1 + (k - row_start(lo));
  return {static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(j)};
}

std::string PaddedId(char prefix, Eigen::Index index) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%c%05ld", prefix,
                static_cast<long>(index));
  return buffer;
}

}  // namespace

void SimParams::Validate() const {
  if (n_items < 1) throw std::invalid_argument("n_items must be positive");
  if (n_raters < 1) throw std::invalid_argument("n_raters must be positive");
  if (!(perception_ambiguity >= 0.0) || !(comparison_ambiguity >= 0.0) ||
      !(threshold_diversity >= 0.0)) {
    throw std::invalid_argument("ambiguities and diversity must be >= 0");
  }
  if (!IsProbability(spam_fraction) || !IsProbability(feature_probability)) {
    throw std::invalid_argument("fractions must lie in [0, 1]");
  }
  if (!(bias_beta_alpha > 0.0) || !(bias_beta_beta > 0.0)) {
    throw std::invalid_argument("bias beta parameters must be positive");
  }
  if (votes_per_item < 1 || votes_per_item % 2 == 0) {
    throw std::invalid_argument("votes_per_item must be odd and positive");
  }
  if (n_comparisons < 1) {
    throw std::invalid_argument("n_comparisons must be positive");
  }
  elo.Validate();
  if (elo.default_rating != 0.0) {
    throw std::invalid_argument(
        "simulation labels by rating sign and needs default rating 0");
  }
}

std::int64_t SimParams::ComparisonsForRatio(double ratio) const {
  if (!(ratio > 0.0)) throw std::invalid_argument("task ratio must be > 0");
  return std::max<std::int64_t>(
      1, std::llround(ratio * static_cast<double>(MajorityTaskCount())));
}

ItemPopulation SampleItems(const SimParams& params, std::uint64_t seed) {
  Rng rng(seed);
  std::bernoulli_distribution feature(params.feature_probability);
  ItemPopulation items;
  items.true_ratings.resize(params.n_items);
  items.feature_flags.resize(params.n_items);
  for (int i = 0; i < params.n_items; ++i) {
    items.true_ratings[i] = DrawNormal(rng, 0.0, 1.0);
    items.feature_flags[i] = feature(rng);
  }
  return items;
}

RaterPopulation SampleRaters(const SimParams& params, std::uint64_t seed) {
  Rng rng(seed);
  const int m = params.n_raters;
  RaterPopulation raters;
  raters.thresholds.resize(m);
  raters.bias_weights = Eigen::VectorXd::Zero(m);
  raters.spam_flags = LabelVector::Constant(m, false);
  for (int r = 0; r < m; ++r) {
    raters.thresholds[r] = DrawNormal(rng, 0.0, params.threshold_diversity);
  }
  if (params.bias_enabled) {
    for (int r = 0; r < m; ++r) {
      raters.bias_weights[r] =
          2.0 * DrawBeta(rng, params.bias_beta_alpha, params.bias_beta_beta) -
          1.0;
    }
  }
  // Exactly floor(fraction * M) spammers at shuffled positions.
  const int n_spam = static_cast<int>(
      std::floor(params.spam_fraction * static_cast<double>(m) + 1e-9));
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int s = 0; s < n_spam; ++s) raters.spam_flags[order[s]] = true;

  for (int r = 0; r < m; ++r) {
    raters.perception_seeds.push_back(DeriveSeed(seed, kPerceptionTag, r));
    raters.spam_seeds.push_back(DeriveSeed(seed, kSpamTag, r));
  }
  return raters;
}

PerceptionCache::PerceptionCache(Eigen::Index n_raters, Eigen::Index n_items)
    : values_(Eigen::MatrixXd::Zero(n_raters, n_items)),
      known_(decltype(known_)::Constant(n_raters, n_items, false)) {}

std::optional<double> PerceptionCache::Find(Eigen::Index rater,
                                            Eigen::Index item) const {
  if (!known_(rater, item)) return std::nullopt;
  return values_(rater, item);
}

void PerceptionCache::Store(Eigen::Index rater, Eigen::Index item,
                            double value) {
  if (known_(rater, item)) return;
  known_(rater, item) = true;
  values_(rater, item) = value;
  ++stored_;
}

Crowd::Crowd(const SimParams& params, ItemPopulation items,
             RaterPopulation raters)
    : perception_ambiguity_(params.perception_ambiguity),
      comparison_ambiguity_(params.comparison_ambiguity),
      items_(std::move(items)),
      raters_(std::move(raters)),
      cache_(raters_.size(), items_.size()) {
  spam_streams_.reserve(raters_.spam_seeds.size());
  for (std::uint64_t seed : raters_.spam_seeds) spam_streams_.emplace_back(seed);
}

void Crowd::CheckRater(Eigen::Index rater) const {
  if (rater < 0 || rater >= n_raters()) {
    throw std::out_of_range("rater index out of range");
  }
}

void Crowd::CheckItem(Eigen::Index item) const {
  if (item < 0 || item >= n_items()) {
    throw std::out_of_range("item index out of range");
  }
}

double Crowd::Perceive(Eigen::Index rater, Eigen::Index item) {
  CheckRater(rater);
  CheckItem(item);
  if (auto cached = cache_.Find(rater, item)) return *cached;
  SplitMix64 gen(DeriveSeed(raters_.perception_seeds[rater], kPerceptionTag,
                            static_cast<std::uint64_t>(item)));
  double value =
      DrawNormal(gen, items_.true_ratings[item], perception_ambiguity_);
  if (items_.feature_flags[item]) value += raters_.bias_weights[rater];
  cache_.Store(rater, item, value);
  return value;
}

bool Crowd::SpamCoin(Eigen::Index rater) {
  return (spam_streams_[rater]() >> 63) != 0;
}

bool Crowd::CastVote(Eigen::Index rater, Eigen::Index item) {
  CheckRater(rater);
  CheckItem(item);
  if (raters_.spam_flags[rater]) return SpamCoin(rater);
  return Perceive(rater, item) > raters_.thresholds[rater];
}

double Crowd::Compare(Eigen::Index rater, Eigen::Index item_a,
                      Eigen::Index item_b) {
  CheckRater(rater);
  CheckItem(item_a);
  CheckItem(item_b);
  if (item_a == item_b) {
    throw std::invalid_argument("cannot compare an item with itself");
  }
  if (raters_.spam_flags[rater]) return SpamCoin(rater) ? 1.0 : 0.0;
  const double a = Perceive(rater, item_a);
  const double b = Perceive(rater, item_b);
  if (std::abs(a - b) < comparison_ambiguity_) return 0.5;
  if (a == b) return 0.5;
  return a > b ? 1.0 : 0.0;
}

Crowd MakeCrowd(const SimParams& params, std::uint64_t run_seed) {
  params.Validate();
  return Crowd(params, SampleItems(params, DeriveSeed(run_seed, kItemsTag)),
               SampleRaters(params, DeriveSeed(run_seed, kRatersTag)));
}

LabelVector MajorityVoteLabels(Crowd& crowd, const SimParams& params,
                               std::uint64_t seed) {
  const Eigen::Index m = crowd.n_raters();
  const int votes = params.votes_per_item;
  if (votes < 1 || votes % 2 == 0) {
    throw std::invalid_argument("votes_per_item must be odd and positive");
  }
  if (m < votes) {
    throw std::invalid_argument("fewer raters than votes per item");
  }
  Rng rng(seed);
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(m));
  std::iota(pool.begin(), pool.end(), Eigen::Index{0});
  LabelVector labels(crowd.n_items());
  for (Eigen::Index item = 0; item < crowd.n_items(); ++item) {
    // Partial Fisher-Yates: the first `votes` slots are distinct raters.
    int positive = 0;
    for (int v = 0; v < votes; ++v) {
      std::uniform_int_distribution<Eigen::Index> pick(v, m - 1);
      std::swap(pool[v], pool[pick(rng)]);
      if (crowd.CastVote(pool[v], item)) ++positive;
    }
    labels[item] = 2 * positive > votes;
  }
  return labels;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> SamplePairs(
    Eigen::Index n_items, std::int64_t count, Rng& rng) {
  if (n_items < 2) throw std::invalid_argument("need at least two items");
  if (count < 0) throw std::invalid_argument("negative pair count");
  const std::int64_t total = PairCount(n_items);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(count));
  while (static_cast<std::int64_t>(pairs.size()) < count) {
    const std::int64_t batch =
        std::min(total, count - static_cast<std::int64_t>(pairs.size()));
    for (std::int64_t k : SampleDistinct(total, batch, rng)) {
      pairs.push_back(DecodePair(n_items, k));
    }
  }
  return pairs;
}

ComparisonRun ComparisonLabels(Crowd& crowd, const SimParams& params,
                               std::uint64_t seed) {
  if (crowd.n_items() < 2) {
    throw std::invalid_argument("comparison labelling needs two items");
  }
  if (params.n_comparisons < 1) {
    throw std::invalid_argument("n_comparisons must be positive");
  }
  Rng rng(DeriveSeed(seed, kPairsTag));
  const auto pairs = SamplePairs(crowd.n_items(), params.n_comparisons, rng);
  std::uniform_int_distribution<Eigen::Index> pick_rater(0,
                                                         crowd.n_raters() - 1);
  std::bernoulli_distribution swap_sides(0.5);

  ComparisonRun run;
  run.matches.reserve(pairs.size());
  run.raters.reserve(pairs.size());
  for (auto [i, j] : pairs) {
    if (swap_sides(rng)) std::swap(i, j);
    const Eigen::Index rater = pick_rater(rng);
    run.matches.push_back({i, j, crowd.Compare(rater, i, j)});
    run.raters.push_back(rater);
  }
  run.ratings =
      Eigen::VectorXd::Constant(crowd.n_items(), params.elo.default_rating);
  ReplayIndexedMatches(run.matches, params.elo, DeriveSeed(seed, kReplayTag),
                       run.ratings);
  run.labels = BinarizeBySign(run.ratings);
  return run;
}

double F1Positive(const LabelVector& predicted, const LabelVector& truth) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("label vectors differ in length");
  }
  const auto tp = (predicted && truth).count();
  const auto fp = (predicted && !truth).count();
  const auto fn = (!predicted && truth).count();
  const auto denominator = 2 * tp + fp + fn;
  if (denominator == 0) return 1.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(denominator);
}

double BiasMetric(const LabelVector& predicted, const LabelVector& truth,
                  const LabelVector& feature_flags) {
  if (predicted.size() != truth.size() ||
      predicted.size() != feature_flags.size()) {
    throw std::invalid_argument("label vectors differ in length");
  }
  const auto n_feature = feature_flags.count();
  if (n_feature == 0) {
    throw std::invalid_argument("no item exhibits the feature");
  }
  const Eigen::ArrayXd difference =
      predicted.cast<double>() - truth.cast<double>();
  return (difference * feature_flags.cast<double>()).sum() /
         static_cast<double>(n_feature);
}

TrialResult RunTrial(const SimParams& params, std::uint64_t run_seed) {
  Crowd crowd = MakeCrowd(params, run_seed);
  const LabelVector truth = crowd.items().TrueLabels();

  TrialResult result;
  result.seed = run_seed;
  result.majority_labels =
      MajorityVoteLabels(crowd, params, DeriveSeed(run_seed, kVotesTag));
  result.comparison_labels =
      ComparisonLabels(crowd, params, DeriveSeed(run_seed, kPairsTag)).labels;
  result.f1_majority = F1Positive(result.majority_labels, truth);
  result.f1_comparison = F1Positive(result.comparison_labels, truth);
  const LabelVector& flags = crowd.items().feature_flags;
  if (flags.any()) {
    result.bias_majority = BiasMetric(result.majority_labels, truth, flags);
    result.bias_comparison = BiasMetric(result.comparison_labels, truth, flags);
  }
  return result;
}

std::uint64_t RunSeed(std::uint64_t master_seed, int run) {
  return DeriveSeed(master_seed, kRunTag, static_cast<std::uint64_t>(run));
}

EnsembleSummary RunEnsemble(const SimParams& params, int n_runs) {
  if (n_runs < 2) {
    throw std::invalid_argument(
        "an ensemble needs at least 2 runs; the standard error is undefined");
  }
  params.Validate();
  EnsembleSummary summary;
  summary.n_runs = n_runs;
  Eigen::VectorXd f1_majority(n_runs);
  Eigen::VectorXd f1_comparison(n_runs);
  Eigen::VectorXd bias_majority(n_runs);
  Eigen::VectorXd bias_comparison(n_runs);
  bool bias_defined = true;
  for (int r = 0; r < n_runs; ++r) {
    TrialResult trial = RunTrial(params, RunSeed(params.master_seed, r));
    f1_majority[r] = trial.f1_majority;
    f1_comparison[r] = trial.f1_comparison;
    if (trial.bias_majority && trial.bias_comparison) {
      bias_majority[r] = *trial.bias_majority;
      bias_comparison[r] = *trial.bias_comparison;
    } else {
      bias_defined = false;
    }
    summary.runs.push_back(std::move(trial));
  }
  summary.f1_majority = Summarize(f1_majority);
  summary.f1_comparison = Summarize(f1_comparison);
  summary.delta_f1 = Summarize(f1_comparison - f1_majority);
  if (bias_defined) {
    summary.bias_majority = Summarize(bias_majority);
    summary.bias_comparison = Summarize(bias_comparison);
  }
  return summary;
}

std::string SimItemId(Eigen::Index item) { return PaddedId('i', item); }
std::string SimRaterId(Eigen::Index rater) { return PaddedId('r', rater); }

SimulatedDataset SimulateDataset(const SimParams& params,
                                 const DatasetDesign& design,
                                 std::uint64_t seed) {
  Crowd crowd = MakeCrowd(params, seed);
  Rng rng(DeriveSeed(seed, kPairsTag));

  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  if (design.pairs == PairDesign::kAllPairs) {
    if (design.replications < 1) {
      throw std::invalid_argument("replications must be positive");
    }
    for (int rep = 0; rep < design.replications; ++rep) {
      for (Eigen::Index i = 0; i < crowd.n_items(); ++i) {
        for (Eigen::Index j = i + 1; j < crowd.n_items(); ++j) {
          pairs.emplace_back(i, j);
        }
      }
    }
    std::shuffle(pairs.begin(), pairs.end(), rng);
  } else {
    if (design.n_records < 1) {
      throw std::invalid_argument("n_records must be positive");
    }
    pairs = SamplePairs(crowd.n_items(), design.n_records, rng);
  }

  // Balanced assignment deals raters out in a shuffled round robin, so every
  // rater gets floor or ceil of records / M tasks.
  std::vector<Eigen::Index> deck(static_cast<std::size_t>(crowd.n_raters()));
  std::iota(deck.begin(), deck.end(), Eigen::Index{0});
  std::uniform_int_distribution<Eigen::Index> pick_rater(0,
                                                         crowd.n_raters() - 1);
  std::bernoulli_distribution swap_sides(0.5);

  SimulatedDataset out;
  out.dataset.provenance = Provenance::kSimulated;
  out.dataset.records.reserve(pairs.size());
  for (Eigen::Index r = 0; r < crowd.n_raters(); ++r) {
    out.rater_ids.push_back(SimRaterId(r));
  }
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    auto [i, j] = pairs[t];
    if (swap_sides(rng)) std::swap(i, j);
    Eigen::Index rater = 0;
    if (design.assignment == RaterAssignment::kBalanced) {
      const std::size_t slot = t % deck.size();
      if (slot == 0) std::shuffle(deck.begin(), deck.end(), rng);
      rater = deck[slot];
    } else {
      rater = pick_rater(rng);
    }
    MatchRecord record;
    record.item_a = SimItemId(i);
    record.item_b = SimItemId(j);
    record.score_a = crowd.Compare(rater, i, j);
    record.rater_id = out.rater_ids[static_cast<std::size_t>(rater)];
    out.dataset.records.push_back(std::move(record));
  }
  // Universe in index order so that position k is item k.
  for (Eigen::Index i = 0; i < crowd.n_items(); ++i) {
    out.dataset.items.push_back(SimItemId(i));
  }
  out.items = crowd.items();
  out.raters = crowd.raters();
  return out;
}

}  // namespace crowdelo
