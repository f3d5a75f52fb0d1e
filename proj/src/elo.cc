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

#include "crowdelo/elo.h"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "crowdelo/random.h"

namespace crowdelo {

void EloConfig::Validate() const {
  if (!(scale_denominator > 0.0) || !std::isfinite(scale_denominator)) {
    throw std::invalid_argument("scale denominator must be positive");
  }
  if (!(k_factor > 0.0) || !std::isfinite(k_factor)) {
    throw std::invalid_argument("k factor must be positive");
  }
  if (epochs < 1) {
    throw std::invalid_argument("epochs must be at least 1");
  }
  if (!(convergence_epsilon >= 0.0)) {
    throw std::invalid_argument("convergence epsilon must be non-negative");
  }
  if (!std::isfinite(default_rating)) {
    throw std::invalid_argument("default rating must be finite");
  }
}

EloConfig EloConfig::ChessPreset() {
  EloConfig config;
  config.default_rating = 1400.0;
  config.epochs = 1;
  config.shuffle = false;
  return config;
}

EloConfig EloConfig::SimulationPreset() { return EloConfig(); }

bool IsValidScore(double score) {
  return score == 0.0 || score == 0.5 || score == 1.0;
}

void MatchRecord::Validate() const {
  if (item_a == item_b) {
    throw std::invalid_argument("item '" + item_a + "' matched against itself");
  }
  if (!IsValidScore(score_a)) {
    throw std::invalid_argument("match score must be 0, 0.5 or 1");
  }
}

bool RatingTable::Contains(std::string_view item) const {
  return index_.contains(std::string(item));
}

std::optional<Eigen::Index> RatingTable::IndexOf(std::string_view item) const {
  auto it = index_.find(std::string(item));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double RatingTable::Rating(std::string_view item) const {
  auto index = IndexOf(item);
  if (!index) {
    throw std::out_of_range("unknown item '" + std::string(item) + "'");
  }
  return ratings_[*index];
}

Eigen::Index RatingTable::AddItem(const std::string& item) {
  auto [it, inserted] =
      index_.try_emplace(item, static_cast<Eigen::Index>(items_.size()));
  if (inserted) {
    items_.push_back(item);
    ratings_.conservativeResize(ratings_.size() + 1);
    ratings_[ratings_.size() - 1] = config_.default_rating;
  }
  return it->second;
}

void RatingTable::SetRating(std::string_view item, double rating) {
  auto index = IndexOf(item);
  if (!index) {
    throw std::out_of_range("unknown item '" + std::string(item) + "'");
  }
  ratings_[*index] = rating;
}

void RatingTable::AddMatch(const MatchRecord& record) {
  record.Validate();
  const Eigen::Index a = AddItem(record.item_a);
  const Eigen::Index b = AddItem(record.item_b);
  std::tie(ratings_[a], ratings_[b]) =
      UpdatePair(ratings_[a], ratings_[b], record.score_a, config_);
}

std::map<std::string, double> RatingTable::AsMap() const {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    out.emplace(items_[i], ratings_[static_cast<Eigen::Index>(i)]);
  }
  return out;
}

double RatingTable::ZeroSumResidual() const {
  return ratings_.sum() -
         static_cast<double>(items_.size()) * config_.default_rating;
}

void ApplyIndexedMatches(std::span<const IndexedMatch> matches,
                         const EloConfig& config,
                         Eigen::Ref<Eigen::VectorXd> ratings) {
  for (const IndexedMatch& match : matches) {
    std::tie(ratings[match.a], ratings[match.b]) = UpdatePair(
        ratings[match.a], ratings[match.b], match.score_a, config);
  }
}

int ReplayIndexedMatches(std::span<const IndexedMatch> matches,
                         const EloConfig& config, std::uint64_t seed,
                         Eigen::Ref<Eigen::VectorXd> ratings) {
  config.Validate();
  std::vector<std::size_t> order(matches.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(DeriveSeed(seed, kReplayTag));
  Eigen::VectorXd before(ratings.size());

  int epoch = 0;
  while (epoch < config.epochs) {
    ++epoch;
    if (config.shuffle) std::shuffle(order.begin(), order.end(), rng);
    before = ratings;
    for (std::size_t idx : order) {
      const IndexedMatch& match = matches[idx];
      std::tie(ratings[match.a], ratings[match.b]) = UpdatePair(
          ratings[match.a], ratings[match.b], match.score_a, config);
    }
    const double max_change =
        ratings.size() == 0 ? 0.0 : (ratings - before).cwiseAbs().maxCoeff();
    if (max_change < config.convergence_epsilon) break;
  }
  return epoch;
}

namespace {

std::vector<IndexedMatch> IndexRecords(std::span<const MatchRecord> records,
                                       RatingTable& table) {
  std::vector<IndexedMatch> indexed;
  indexed.reserve(records.size());
  for (const MatchRecord& record : records) {
    record.Validate();
    const Eigen::Index a = table.AddItem(record.item_a);
    const Eigen::Index b = table.AddItem(record.item_b);
    indexed.push_back({a, b, record.score_a});
  }
  return indexed;
}

}  // namespace

RatingTable ApplyMatchSequence(std::span<const MatchRecord> records,
                               const EloConfig& config) {
  config.Validate();
  RatingTable table(config);
  const std::vector<IndexedMatch> indexed = IndexRecords(records, table);
  ApplyIndexedMatches(indexed, config, table.mutable_ratings());
  return table;
}

RatingTable ReplayEpochs(std::span<const MatchRecord> records,
                         const EloConfig& config, std::uint64_t seed,
                         std::span<const std::string> universe) {
  config.Validate();
  RatingTable table(config);
  for (const std::string& item : universe) table.AddItem(item);
  const std::vector<IndexedMatch> indexed = IndexRecords(records, table);
  ReplayIndexedMatches(indexed, config, seed, table.mutable_ratings());
  return table;
}

std::map<std::string, int> Rankings(const RatingTable& table) {
  std::vector<Eigen::Index> order(table.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Eigen::VectorXd& ratings = table.ratings();
  const std::vector<std::string>& items = table.items();
  std::sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
    if (ratings[l] != ratings[r]) return ratings[l] > ratings[r];
    return items[l] < items[r];
  });
  std::map<std::string, int> ranks;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    ranks.emplace(items[order[rank]], static_cast<int>(rank));
  }
  return ranks;
}

double Median(Eigen::Ref<const Eigen::VectorXd> values) {
  if (values.size() == 0) {
    throw std::invalid_argument("median of an empty sequence");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

LabelVector BinarizeBySign(Eigen::Ref<const Eigen::VectorXd> ratings) {
  return ratings.array() > 0.0;
}

LabelVector BinarizeByMedian(Eigen::Ref<const Eigen::VectorXd> ratings) {
  const double median = Median(ratings);
  return ratings.array() > median;
}

std::map<std::string, bool> Binarize(const RatingTable& table,
                                     BinarizeMode mode) {
  if (table.empty()) {
    throw std::invalid_argument("cannot binarize an empty rating table");
  }
  LabelVector labels;
  if (mode == BinarizeMode::kSign) {
    if (table.config().default_rating != 0.0) {
      std::cerr << "warning: sign binarization with default rating "
                << table.config().default_rating << " != 0\n";
    }
    labels = BinarizeBySign(table.ratings());
  } else {
    labels = BinarizeByMedian(table.ratings());
  }
  std::map<std::string, bool> out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    out.emplace(table.items()[i], labels[static_cast<Eigen::Index>(i)]);
  }
  return out;
}

}  // namespace crowdelo
