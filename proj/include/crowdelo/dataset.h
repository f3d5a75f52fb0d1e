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

// Rater-attributed comparison datasets and their CSV form:
//
//   item_a,item_b,outcome,rater_id[,timestamp]
//
// `outcome` is 1.0, 0.5 or 0.0 (win, draw, loss for item_a). A trailing
// timestamp column is accepted and ignored.

#ifndef CROWDELO_DATASET_H_
#define CROWDELO_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "crowdelo/elo.h"

namespace crowdelo {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class Provenance { kSimulated, kIngested };

struct ComparisonDataset {
  std::vector<MatchRecord> records;
  // Every item mentioned by a record, in first-seen order.
  std::vector<std::string> items;
  Provenance provenance = Provenance::kIngested;

  // Rebuilds `items` from the records.
  void RebuildItems();
  std::set<std::string> Raters() const;
};

ComparisonDataset LoadComparisons(std::istream& in);
// Throws std::runtime_error when the file cannot be opened.
ComparisonDataset LoadComparisonsFile(const std::filesystem::path& path);

void WriteComparisons(const ComparisonDataset& dataset, std::ostream& out);

// Keeps the records whose endpoints are both in `subset`, in order. Throws
// std::invalid_argument for an item outside the dataset's universe.
ComparisonDataset RestrictToItems(const ComparisonDataset& dataset,
                                  const std::vector<std::string>& subset);

}  // namespace crowdelo

#endif  // CROWDELO_DATASET_H_
