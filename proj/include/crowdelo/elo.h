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

// Sequential Elo rating over pairwise match outcomes.
//
// The expected score of item A against item B is the logistic
//
//   E_A = 1 / (1 + base^(-(R_A - R_B) / denom))
//
// and a match with realised outcome S_A moves both ratings by the same
// amount k * (S_A - E_A) in opposite directions, so the mean rating of all
// items never changes. With base e and denom 400 a single pass over the
// records reproduces the reference Python package bit for bit.

#ifndef CROWDELO_ELO_H_
#define CROWDELO_ELO_H_

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace crowdelo {

enum class LogisticBase { kNatural, kTen };

struct EloConfig {
  double scale_denominator = 400.0;
  LogisticBase logistic_base = LogisticBase::kNatural;
  // Maximum number of points that change hands in one match.
  double k_factor = 30.0;
  double default_rating = 0.0;
  int epochs = 20;
  // Replay stops once no rating moved more than this over a whole epoch.
  double convergence_epsilon = 0.03;
  // When false every epoch replays the records in their given order.
  bool shuffle = true;

  // Throws std::invalid_argument on a non-positive denominator or k, or on
  // fewer than one epoch.
  void Validate() const;

  // Single pass in record order from 1400, as in the reference package.
  static EloConfig ChessPreset();
  // Shuffled multi-epoch replay from 0 so that labels follow the sign.
  static EloConfig SimulationPreset();
};

// Seed used wherever a caller needs one documented, reproducible replay.
inline constexpr std::uint64_t kCanonicalReplaySeed = 0x5eed'e10'c0ffeeULL;

// The three admissible outcomes; anything else is rejected.
bool IsValidScore(double score);

template <typename Scalar>
Scalar ExpectedScore(const Scalar& rating_a, const Scalar& rating_b,
                     const EloConfig& config) {
  using std::exp;
  using std::pow;
  const Scalar exponent =
      -((rating_a - rating_b) / Scalar(config.scale_denominator));
  const Scalar odds = config.logistic_base == LogisticBase::kNatural
                          ? Scalar(exp(exponent))
                          : Scalar(pow(Scalar(10), exponent));
  return Scalar(1) / (Scalar(1) + odds);
}

// Points item_a gains (and item_b loses) for a score in [0, 1]. Fractional
// scores are allowed here; UpdatePair restricts them to realisable outcomes.
template <typename Scalar>
Scalar RatingTransfer(const Scalar& rating_a, const Scalar& rating_b,
                      const Scalar& score_a, const EloConfig& config) {
  return Scalar(config.k_factor) *
         (score_a - ExpectedScore(rating_a, rating_b, config));
}

// Returns the post-match ratings of both items. Throws std::invalid_argument
// when score_a is not one of {0, 0.5, 1}.
template <typename Scalar>
std::pair<Scalar, Scalar> UpdatePair(const Scalar& rating_a,
                                     const Scalar& rating_b, double score_a,
                                     const EloConfig& config) {
  if (!IsValidScore(score_a)) {
    throw std::invalid_argument("match score must be 0, 0.5 or 1");
  }
  const Scalar transfer =
      RatingTransfer(rating_a, rating_b, Scalar(score_a), config);
  return {rating_a + transfer, rating_b - transfer};
}

struct MatchRecord {
  std::string item_a;
  std::string item_b;
  // Realised outcome for item_a: 1 win, 0.5 draw, 0 loss.
  double score_a = 0.0;
  std::optional<std::string> rater_id;

  // Throws std::invalid_argument on a self-match or an invalid score.
  void Validate() const;
};

// Ratings keyed by item identifier. Items keep the order in which they were
// first seen; the rating vector is aligned with that order.
class RatingTable {
 public:
  RatingTable() = default;
  explicit RatingTable(EloConfig config) : config_(config) {}

  const EloConfig& config() const { return config_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  const std::vector<std::string>& items() const { return items_; }
  const Eigen::VectorXd& ratings() const { return ratings_; }
  Eigen::VectorXd& mutable_ratings() { return ratings_; }

  bool Contains(std::string_view item) const;
  // Throws std::out_of_range for an unknown item.
  double Rating(std::string_view item) const;
  std::optional<Eigen::Index> IndexOf(std::string_view item) const;

  // Registers the item at the default rating if unseen; returns its index.
  Eigen::Index AddItem(const std::string& item);
  void SetRating(std::string_view item, double rating);

  // Applies one match, registering unseen items first.
  void AddMatch(const MatchRecord& record);

  std::map<std::string, double> AsMap() const;
  // Sum of ratings minus item count times the default rating.
  double ZeroSumResidual() const;

 private:
  EloConfig config_;
  std::vector<std::string> items_;
  std::unordered_map<std::string, Eigen::Index> index_;
  Eigen::VectorXd ratings_;
};

// A match between two items addressed by dense index.
struct IndexedMatch {
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  double score_a = 0.0;
};

// Left fold of UpdatePair over the matches, in order.
void ApplyIndexedMatches(std::span<const IndexedMatch> matches,
                         const EloConfig& config,
                         Eigen::Ref<Eigen::VectorXd> ratings);

// Multi-epoch replay over dense indices. Returns the number of epochs run.
int ReplayIndexedMatches(std::span<const IndexedMatch> matches,
                         const EloConfig& config, std::uint64_t seed,
                         Eigen::Ref<Eigen::VectorXd> ratings);

RatingTable ApplyMatchSequence(std::span<const MatchRecord> records,
                               const EloConfig& config);

// Replays all records for up to config.epochs epochs, shuffling each epoch
// with a stream derived from `seed` when config.shuffle is set. Items listed
// in `universe` are registered first so that they appear even without
// matches.
RatingTable ReplayEpochs(std::span<const MatchRecord> records,
                         const EloConfig& config, std::uint64_t seed,
                         std::span<const std::string> universe = {});

// Rank 0 is the highest rating; ties go to the lexicographically smaller id.
std::map<std::string, int> Rankings(const RatingTable& table);

enum class BinarizeMode { kSign, kMedian };

double Median(Eigen::Ref<const Eigen::VectorXd> values);

// Positive iff the rating is strictly above 0 (kSign) or strictly above the
// median of the table (kMedian). Throws std::invalid_argument on an empty
// table.
std::map<std::string, bool> Binarize(const RatingTable& table,
                                     BinarizeMode mode);

using LabelVector = Eigen::Array<bool, Eigen::Dynamic, 1>;

LabelVector BinarizeBySign(Eigen::Ref<const Eigen::VectorXd> ratings);
LabelVector BinarizeByMedian(Eigen::Ref<const Eigen::VectorXd> ratings);

}  // namespace crowdelo

#endif  // CROWDELO_ELO_H_
