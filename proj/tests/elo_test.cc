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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

namespace crowdelo {
namespace {

using ::testing::ElementsAre;

std::vector<MatchRecord> ListingRecords() {
  return {{"p1", "p2", 1.0, {}}, {"p1", "p2", 1.0, {}}, {"p2", "p1", 0.5, {}}};
}

TEST(EloConfigTest, PresetsAndValidation) {
  const EloConfig chess = EloConfig::ChessPreset();
  EXPECT_EQ(chess.k_factor, 30.0);
  EXPECT_EQ(chess.default_rating, 1400.0);
  EXPECT_EQ(chess.epochs, 1);
  EXPECT_FALSE(chess.shuffle);
  EXPECT_EQ(chess.logistic_base, LogisticBase::kNatural);

  const EloConfig sim = EloConfig::SimulationPreset();
  EXPECT_EQ(sim.default_rating, 0.0);
  EXPECT_EQ(sim.epochs, 20);
  EXPECT_DOUBLE_EQ(sim.convergence_epsilon, 1e-3 * sim.k_factor);

  EloConfig bad;
  bad.scale_denominator = 0.0;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  bad = EloConfig();
  bad.k_factor = -1.0;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  bad = EloConfig();
  bad.epochs = 0;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  bad = EloConfig();
  bad.convergence_epsilon = -0.1;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  EXPECT_NO_THROW(EloConfig().Validate());
}

TEST(ExpectedScoreTest, EqualRatingsGiveHalf) {
  EXPECT_EQ(ExpectedScore(1400.0, 1400.0, EloConfig()), 0.5);
  EloConfig ten;
  ten.logistic_base = LogisticBase::kTen;
  EXPECT_EQ(ExpectedScore(-7.0, -7.0, ten), 0.5);
}

TEST(ExpectedScoreTest, ListingValue) {
  EXPECT_NEAR(ExpectedScore(1428.3358360702414, 1371.6641639297586,
                            EloConfig()),
              0.5353606653429002, 1e-15);
}

TEST(ExpectedScoreTest, BaseTenFourHundredPointsIsTenToOne) {
  EloConfig ten;
  ten.logistic_base = LogisticBase::kTen;
  EXPECT_NEAR(ExpectedScore(1400.0, 1800.0, ten), 1.0 / 11.0, 1e-15);
  EXPECT_NEAR(ExpectedScore(1800.0, 1400.0, ten), 10.0 / 11.0, 1e-15);
}

TEST(ExpectedScoreTest, HigherRatingIsFavoured) {
  const EloConfig config;
  EXPECT_GT(ExpectedScore(100.0, 0.0, config), 0.5);
  EXPECT_LT(ExpectedScore(0.0, 100.0, config), 0.5);
}

TEST(ExpectedScoreTest, DenominatorScalesTheDifference) {
  EloConfig wide;
  wide.scale_denominator = 800.0;
  EXPECT_NEAR(ExpectedScore(200.0, 0.0, wide),
              ExpectedScore(100.0, 0.0, EloConfig()), 1e-15);
}

TEST(ExpectedScoreTest, WorksForOtherScalarTypes) {
  const EloConfig config;
  const long double wide = ExpectedScore(1428.3358360702414L,
                                         1371.6641639297586L, config);
  EXPECT_NEAR(static_cast<double>(wide), 0.5353606653429002, 1e-15);
  const float narrow = ExpectedScore(10.0f, 0.0f, config);
  EXPECT_NEAR(narrow, 1.0 / (1.0 + std::exp(-10.0 / 400.0)), 1e-6);
}

TEST(ExpectedScoreTest, Properties) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rating(-5000.0, 5000.0);
  for (LogisticBase base : {LogisticBase::kNatural, LogisticBase::kTen}) {
    EloConfig config;
    config.logistic_base = base;
    for (int i = 0; i < 2000; ++i) {
      const double a = rating(rng);
      const double b = rating(rng);
      const double c = rating(rng);
      const double e = ExpectedScore(a, b, config);
      EXPECT_NEAR(e + ExpectedScore(b, a, config), 1.0, 1e-12);
      EXPECT_NEAR(ExpectedScore(a + c, b + c, config), e, 1e-12);
      EXPECT_GE(e, 0.0);
      EXPECT_LE(e, 1.0);
      EXPECT_NEAR(RatingTransfer(a, b, e, config), 0.0, 1e-12);
    }
  }
}

TEST(ExpectedScoreTest, StrictlyMonotone) {
  const EloConfig config;
  double previous = 0.0;
  for (double a = -1000.0; a <= 1000.0; a += 50.0) {
    const double e = ExpectedScore(a, 0.0, config);
    EXPECT_GT(e, previous);
    previous = e;
  }
  previous = 1.0;
  for (double b = -1000.0; b <= 1000.0; b += 50.0) {
    const double e = ExpectedScore(0.0, b, config);
    EXPECT_LT(e, previous);
    previous = e;
  }
}

TEST(UpdatePairTest, FirstListingMatch) {
  const auto [a, b] = UpdatePair(1400.0, 1400.0, 1.0, EloConfig());
  EXPECT_EQ(a, 1415.0);
  EXPECT_EQ(b, 1385.0);
}

TEST(UpdatePairTest, DrawBetweenEqualsChangesNothing) {
  const auto [a, b] = UpdatePair(1400.0, 1400.0, 0.5, EloConfig());
  EXPECT_EQ(a, 1400.0);
  EXPECT_EQ(b, 1400.0);
}

TEST(UpdatePairTest, SecondListingMatch) {
  const auto [a, b] = UpdatePair(1415.0, 1385.0, 1.0, EloConfig());
  EXPECT_NEAR(a, 1429.437763523644, 1e-9);
  EXPECT_NEAR(b, 1370.562236476356, 1e-9);
}

TEST(UpdatePairTest, RejectsUnrealisableScores) {
  for (double score : {0.7, -0.5, 1.5, 0.25, std::nan("")}) {
    EXPECT_THROW(UpdatePair(0.0, 0.0, score, EloConfig()),
                 std::invalid_argument)
        << score;
  }
}

TEST(UpdatePairTest, TransferIsAntisymmetricAndBounded) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rating(-3000.0, 3000.0);
  const EloConfig config;
  for (int i = 0; i < 1000; ++i) {
    const double a = rating(rng);
    const double b = rating(rng);
    for (double s : {0.0, 0.5, 1.0}) {
      const auto [a2, b2] = UpdatePair(a, b, s, config);
      EXPECT_NEAR(a2 + b2, a + b, 1e-9);
      EXPECT_LE(std::abs(a2 - a), config.k_factor);
    }
  }
}

TEST(MatchRecordTest, Validate) {
  EXPECT_NO_THROW((MatchRecord{"a", "b", 0.5, {}}).Validate());
  EXPECT_THROW((MatchRecord{"a", "a", 1.0, {}}).Validate(),
               std::invalid_argument);
  EXPECT_THROW((MatchRecord{"a", "b", 0.3, {}}).Validate(),
               std::invalid_argument);
}

TEST(ApplyMatchSequenceTest, ListingGoldenValues) {
  const RatingTable table =
      ApplyMatchSequence(ListingRecords(), EloConfig::ChessPreset());
  EXPECT_NEAR(table.Rating("p1"), 1428.3358360702414, 1e-9);
  EXPECT_NEAR(table.Rating("p2"), 1371.6641639297586, 1e-9);
  EXPECT_NEAR(ExpectedScore(table.Rating("p1"), table.Rating("p2"),
                            table.config()),
              0.5353606653429002, 1e-9);
  EXPECT_THAT(table.items(), ElementsAre("p1", "p2"));
  const auto ranks = Rankings(table);
  EXPECT_EQ(ranks.at("p1"), 0);
  EXPECT_EQ(ranks.at("p2"), 1);
}

TEST(ApplyMatchSequenceTest, EmptySequenceGivesEmptyTable) {
  const RatingTable table = ApplyMatchSequence({}, EloConfig());
  EXPECT_TRUE(table.empty());
  EXPECT_TRUE(Rankings(table).empty());
}

TEST(ApplyMatchSequenceTest, WinThenLossFromZero) {
  const std::vector<MatchRecord> records = {{"a", "b", 1.0, {}},
                                            {"a", "b", 0.0, {}}};
  const RatingTable table = ApplyMatchSequence(records, EloConfig());
  // 15 after the win, then 15 - 30 * E(15, -15).
  EXPECT_NEAR(table.Rating("a"), -0.5622364763560554, 1e-12);
  EXPECT_NEAR(table.Rating("b"), 0.5622364763560554, 1e-12);
  EXPECT_NEAR(table.Rating("a") + table.Rating("b"), 0.0, 1e-12);
}

TEST(ApplyMatchSequenceTest, EqualsIncrementalAddMatch) {
  RatingTable incremental(EloConfig::ChessPreset());
  for (const MatchRecord& r : ListingRecords()) incremental.AddMatch(r);
  const RatingTable batch =
      ApplyMatchSequence(ListingRecords(), EloConfig::ChessPreset());
  EXPECT_EQ(incremental.AsMap(), batch.AsMap());
}

TEST(ApplyMatchSequenceTest, RejectsSelfMatch) {
  const std::vector<MatchRecord> records = {{"a", "a", 1.0, {}}};
  EXPECT_THROW(ApplyMatchSequence(records, EloConfig()),
               std::invalid_argument);
}

TEST(RatingTableTest, Accessors) {
  RatingTable table(EloConfig::ChessPreset());
  EXPECT_EQ(table.AddItem("x"), 0);
  EXPECT_EQ(table.AddItem("y"), 1);
  EXPECT_EQ(table.AddItem("x"), 0);
  EXPECT_EQ(table.Rating("x"), 1400.0);
  EXPECT_TRUE(table.Contains("y"));
  EXPECT_FALSE(table.Contains("z"));
  EXPECT_EQ(table.IndexOf("y"), 1);
  EXPECT_FALSE(table.IndexOf("z").has_value());
  EXPECT_THROW(table.Rating("z"), std::out_of_range);
  table.SetRating("y", 1300.0);
  EXPECT_EQ(table.Rating("y"), 1300.0);
  EXPECT_DOUBLE_EQ(table.ZeroSumResidual(), -100.0);
}

TEST(ReplayEpochsTest, SinglePassWithoutShuffleEqualsSequence) {
  EloConfig config = EloConfig::SimulationPreset();
  config.epochs = 1;
  config.shuffle = false;
  const RatingTable replay = ReplayEpochs(ListingRecords(), config, 123);
  const RatingTable sequence = ApplyMatchSequence(ListingRecords(), config);
  EXPECT_EQ(replay.AsMap(), sequence.AsMap());
}

TEST(ReplayEpochsTest, RepeatedWinWidensGapByShrinkingSteps) {
  const std::vector<MatchRecord> records = {{"a", "b", 1.0, {}}};
  EloConfig config;
  config.convergence_epsilon = 0.0;
  double previous_gap = 0.0;
  double previous_step = std::numeric_limits<double>::infinity();
  for (int epochs = 1; epochs <= 30; ++epochs) {
    config.epochs = epochs;
    const RatingTable table = ReplayEpochs(records, config, 0);
    const double gap = table.Rating("a") - table.Rating("b");
    EXPECT_GT(gap, previous_gap);
    EXPECT_LT(gap - previous_gap, previous_step);
    previous_step = gap - previous_gap;
    previous_gap = gap;
  }
}

TEST(ReplayEpochsTest, DeterministicAndZeroSum) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> item(0, 9);
  std::uniform_int_distribution<int> score(0, 2);
  std::vector<MatchRecord> records;
  while (records.size() < 300) {
    const int a = item(rng);
    const int b = item(rng);
    if (a == b) continue;
    records.push_back({"i" + std::to_string(a), "i" + std::to_string(b),
                       0.5 * score(rng), {}});
  }
  EloConfig config;
  config.default_rating = 250.0;
  const RatingTable first = ReplayEpochs(records, config, 42);
  const RatingTable second = ReplayEpochs(records, config, 42);
  EXPECT_EQ(first.AsMap(), second.AsMap());
  EXPECT_LT(std::abs(first.ZeroSumResidual()), 1e-6);
  // A different seed generally orders the epochs differently.
  const RatingTable other = ReplayEpochs(records, config, 43);
  EXPECT_NE(first.AsMap(), other.AsMap());
}

TEST(ReplayEpochsTest, StopsEarlyOnceConverged) {
  const std::vector<MatchRecord> records = {{"a", "b", 0.5, {}}};
  Eigen::VectorXd ratings = Eigen::VectorXd::Zero(2);
  const std::vector<IndexedMatch> matches = {{0, 1, 0.5}};
  EloConfig config;
  config.epochs = 50;
  EXPECT_EQ(ReplayIndexedMatches(matches, config, 0, ratings), 1);
}

TEST(ReplayEpochsTest, UniverseItemsAppearWithoutMatches) {
  const std::vector<std::string> universe = {"z", "p1", "p2"};
  const RatingTable table =
      ReplayEpochs(ListingRecords(), EloConfig::ChessPreset(), 0, universe);
  EXPECT_THAT(table.items(), ElementsAre("z", "p1", "p2"));
  EXPECT_EQ(table.Rating("z"), 1400.0);
}

TEST(RankingsTest, SingleItem) {
  RatingTable table;
  table.AddItem("x");
  EXPECT_EQ(Rankings(table).at("x"), 0);
}

TEST(RankingsTest, TiesGoToSmallerId) {
  RatingTable table;
  table.AddItem("b");
  table.AddItem("a");
  table.SetRating("a", 5.0);
  table.SetRating("b", 5.0);
  const auto ranks = Rankings(table);
  EXPECT_EQ(ranks.at("a"), 0);
  EXPECT_EQ(ranks.at("b"), 1);
}

TEST(RankingsTest, InvariantUnderShift) {
  RatingTable table;
  for (const auto& [id, r] : std::vector<std::pair<std::string, double>>{
           {"a", 3.0}, {"b", -1.0}, {"c", 7.5}, {"d", 0.0}}) {
    table.AddItem(id);
    table.SetRating(id, r);
  }
  const auto before = Rankings(table);
  table.mutable_ratings().array() += 1234.5;
  EXPECT_EQ(Rankings(table), before);
  EXPECT_EQ(before.at("c"), 0);
  EXPECT_EQ(before.at("b"), 3);
}

RatingTable MakeTable(
    const std::vector<std::pair<std::string, double>>& values) {
  RatingTable table;
  for (const auto& [id, r] : values) {
    table.AddItem(id);
    table.SetRating(id, r);
  }
  return table;
}

TEST(BinarizeTest, Sign) {
  const auto labels =
      Binarize(MakeTable({{"a", 3.0}, {"b", -3.0}}), BinarizeMode::kSign);
  EXPECT_TRUE(labels.at("a"));
  EXPECT_FALSE(labels.at("b"));
  EXPECT_FALSE(Binarize(MakeTable({{"a", 0.0}}), BinarizeMode::kSign).at("a"));
}

TEST(BinarizeTest, MedianIsStrict) {
  const auto labels = Binarize(MakeTable({{"a", 1.0}, {"b", 2.0}, {"c", 3.0}}),
                               BinarizeMode::kMedian);
  EXPECT_FALSE(labels.at("a"));
  EXPECT_FALSE(labels.at("b"));
  EXPECT_TRUE(labels.at("c"));
}

TEST(BinarizeTest, MedianOfEvenCountAveragesMiddlePair) {
  Eigen::VectorXd values(4);
  values << 4.0, 1.0, 3.0, 2.0;
  EXPECT_EQ(Median(values), 2.5);
  const LabelVector labels = BinarizeByMedian(values);
  EXPECT_THAT(std::vector<bool>(labels.begin(), labels.end()),
              ElementsAre(true, false, true, false));
}

TEST(BinarizeTest, EmptyTableIsAnError) {
  EXPECT_THROW(Binarize(RatingTable(), BinarizeMode::kSign),
               std::invalid_argument);
  EXPECT_THROW(Binarize(RatingTable(), BinarizeMode::kMedian),
               std::invalid_argument);
}

TEST(BinarizeTest, SignWithNonzeroDefaultWarns) {
  RatingTable table(EloConfig::ChessPreset());
  table.AddItem("x");
  testing::internal::CaptureStderr();
  Binarize(table, BinarizeMode::kSign);
  EXPECT_THAT(testing::internal::GetCapturedStderr(),
              ::testing::HasSubstr("warning"));
}

TEST(BinarizeTest, ZeroSumTableWithAPositiveHasANegative) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> item(0, 5);
  std::uniform_int_distribution<int> score(0, 2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MatchRecord> records;
    while (records.size() < 20) {
      const int a = item(rng);
      const int b = item(rng);
      if (a == b) continue;
      records.push_back({std::to_string(a), std::to_string(b),
                         0.5 * score(rng), {}});
    }
    const RatingTable table = ReplayEpochs(records, EloConfig(), trial);
    const LabelVector labels = BinarizeBySign(table.ratings());
    if (labels.any()) {
      EXPECT_FALSE(labels.all());
    }
  }
}

}  // namespace
}  // namespace crowdelo
