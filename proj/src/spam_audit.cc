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

#include "crowdelo/spam_audit.h"

#include <Eigen/Core>

#include "crowdelo/stats.h"

namespace crowdelo {
namespace {

std::vector<const MatchRecord*> RecordsOf(const ComparisonDataset& dataset,
                                          const std::string& rater_id) {
  std::vector<const MatchRecord*> out;
  for (const MatchRecord& record : dataset.records) {
    if (record.rater_id && *record.rater_id == rater_id) out.push_back(&record);
  }
  return out;
}

struct RaterScores {
  std::vector<double> differences;
  std::vector<double> outcomes;
  std::vector<double> selection_probabilities;
};

RaterScores ScoreRater(const std::vector<const MatchRecord*>& records,
                       const RatingTable& ratings) {
  RaterScores scores;
  const EloConfig& config = ratings.config();
  for (const MatchRecord* record : records) {
    const double ra = ratings.Rating(record->item_a);
    const double rb = ratings.Rating(record->item_b);
    scores.differences.push_back(ra - rb);
    scores.outcomes.push_back(record->score_a);
    if (record->score_a != 0.5) {
      const double expected = ExpectedScore(ra, rb, config);
      scores.selection_probabilities.push_back(
          record->score_a == 1.0 ? expected : 1.0 - expected);
    }
  }
  return scores;
}

std::optional<double> Correlation(const RaterScores& scores) {
  const Eigen::Map<const Eigen::VectorXd> x(
      scores.differences.data(),
      static_cast<Eigen::Index>(scores.differences.size()));
  const Eigen::Map<const Eigen::VectorXd> y(
      scores.outcomes.data(), static_cast<Eigen::Index>(scores.outcomes.size()));
  return PearsonCorrelation(x, y);
}

double MedianProbability(const RaterScores& scores) {
  return Median(Eigen::Map<const Eigen::VectorXd>(
      scores.selection_probabilities.data(),
      static_cast<Eigen::Index>(scores.selection_probabilities.size())));
}

}  // namespace

std::string AuditFlagName(AuditFlag flag) {
  switch (flag) {
    case AuditFlag::kLowCorrelation:
      return "low_correlation";
    case AuditFlag::kLowMedianProbability:
      return "low_median_probability";
    case AuditFlag::kInsufficientData:
      return "insufficient_data";
  }
  return "unknown";
}

void AuditThresholds::Validate() const {
  if (!(correlation_floor >= -1.0 && correlation_floor <= 1.0)) {
    throw std::invalid_argument("correlation floor must lie in [-1, 1]");
  }
  if (!(probability_floor >= 0.0 && probability_floor <= 1.0)) {
    throw std::invalid_argument("probability floor must lie in [0, 1]");
  }
  if (min_records < 0) {
    throw std::invalid_argument("min_records must be non-negative");
  }
}

RatingTable LeaveOneOutRatings(const ComparisonDataset& dataset,
                               const std::string& rater_id,
                               const EloConfig& config) {
  std::vector<MatchRecord> remaining;
  remaining.reserve(dataset.records.size());
  for (const MatchRecord& record : dataset.records) {
    if (!record.rater_id || *record.rater_id != rater_id) {
      remaining.push_back(record);
    }
  }
  return ReplayEpochs(remaining, config, kCanonicalReplaySeed, dataset.items);
}

std::optional<double> OutcomeCorrelation(const ComparisonDataset& dataset,
                                         const std::string& rater_id,
                                         const EloConfig& config) {
  const auto records = RecordsOf(dataset, rater_id);
  if (records.size() < 2) {
    throw InsufficientData("rater '" + rater_id +
                           "' has fewer than two comparisons");
  }
  const RatingTable ratings = LeaveOneOutRatings(dataset, rater_id, config);
  return Correlation(ScoreRater(records, ratings));
}

double MedianSelectionProbability(const ComparisonDataset& dataset,
                                  const std::string& rater_id,
                                  const EloConfig& config) {
  const auto records = RecordsOf(dataset, rater_id);
  const RatingTable ratings = LeaveOneOutRatings(dataset, rater_id, config);
  const RaterScores scores = ScoreRater(records, ratings);
  if (scores.selection_probabilities.empty()) {
    throw InsufficientData("rater '" + rater_id +
                           "' has no decisive comparison");
  }
  return MedianProbability(scores);
}

std::vector<RaterAudit> FlagSpammers(const ComparisonDataset& dataset,
                                     const EloConfig& config,
                                     const AuditThresholds& thresholds) {
  thresholds.Validate();
  std::vector<RaterAudit> audits;
  for (const std::string& rater_id : dataset.Raters()) {
    const auto records = RecordsOf(dataset, rater_id);
    RaterAudit audit;
    audit.rater_id = rater_id;
    audit.n_comparisons = static_cast<int>(records.size());

    // One leave-one-out replay serves both scores.
    const RaterScores scores =
        ScoreRater(records, LeaveOneOutRatings(dataset, rater_id, config));
    if (records.size() >= 2) audit.outcome_correlation = Correlation(scores);
    if (!scores.selection_probabilities.empty()) {
      audit.median_selection_probability = MedianProbability(scores);
    }

    if (audit.n_comparisons < thresholds.min_records ||
        records.size() < 2) {
      audit.flags.insert(AuditFlag::kInsufficientData);
    } else {
      if (audit.outcome_correlation &&
          *audit.outcome_correlation < thresholds.correlation_floor) {
        audit.flags.insert(AuditFlag::kLowCorrelation);
      }
      if (audit.median_selection_probability &&
          *audit.median_selection_probability < thresholds.probability_floor) {
        audit.flags.insert(AuditFlag::kLowMedianProbability);
      }
    }
    audits.push_back(std::move(audit));
  }
  return audits;
}

}  // namespace crowdelo
