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

// Spam heuristics over a rater's comparison history. Each rater is judged
// against ratings computed without their own records:
//
//  * outcome correlation: linear correlation between the leave-one-out
//    rating difference R_a - R_b and the chosen outcome S_a. Attentive raters
//    correlate positively.
//  * median selection probability: median over the rater's decisive records
//    of the expected score of the side they picked. Random clickers sit near
//    or below 0.5.

#ifndef CROWDELO_SPAM_AUDIT_H_
#define CROWDELO_SPAM_AUDIT_H_

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "crowdelo/dataset.h"
#include "crowdelo/elo.h"

namespace crowdelo {

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AuditFlag { kLowCorrelation, kLowMedianProbability,
                       kInsufficientData };

std::string AuditFlagName(AuditFlag flag);

struct RaterAudit {
  std::string rater_id;
  int n_comparisons = 0;
  // Unset with too few records or a zero-variance series.
  std::optional<double> outcome_correlation;
  std::optional<double> median_selection_probability;
  std::set<AuditFlag> flags;

  bool IsSpamSuspect() const {
    return flags.contains(AuditFlag::kLowCorrelation) ||
           flags.contains(AuditFlag::kLowMedianProbability);
  }
};

struct AuditThresholds {
  double correlation_floor = 0.35;
  double probability_floor = 0.6;
  int min_records = 20;

  // Throws std::invalid_argument for floors outside [-1, 1] / [0, 1] or a
  // negative record minimum.
  void Validate() const;
};

// Ratings over every record not made by `rater_id`, for every item of the
// dataset's universe.
RatingTable LeaveOneOutRatings(const ComparisonDataset& dataset,
                               const std::string& rater_id,
                               const EloConfig& config);

// Throws InsufficientData when the rater has fewer than two records.
std::optional<double> OutcomeCorrelation(const ComparisonDataset& dataset,
                                         const std::string& rater_id,
                                         const EloConfig& config);

// Draws are skipped. Throws InsufficientData without a decisive record.
double MedianSelectionProbability(const ComparisonDataset& dataset,
                                  const std::string& rater_id,
                                  const EloConfig& config);

// One audit per rater, ordered by rater id.
std::vector<RaterAudit> FlagSpammers(const ComparisonDataset& dataset,
                                     const EloConfig& config,
                                     const AuditThresholds& thresholds = {});

}  // namespace crowdelo

#endif  // CROWDELO_SPAM_AUDIT_H_
