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

#include "crowdelo/dataset.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_set>

namespace crowdelo {
namespace {

constexpr std::string_view kColumns[] = {"item_a", "item_b", "outcome",
                                         "rater_id"};
constexpr std::string_view kTimestampColumn = "timestamp";

// Splits one CSV line; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> SplitCsvLine(std::string_view line,
                                      std::size_t line_number) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) throw ParseError(line_number, "unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

double ParseOutcome(const std::string& text, std::size_t line_number) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !IsValidScore(value)) {
    throw ParseError(line_number, "outcome '" + text +
                                      "' is not one of 1.0, 0.5, 0.0");
  }
  return value;
}

std::string FormatOutcome(double score) {
  if (score == 1.0) return "1.0";
  if (score == 0.5) return "0.5";
  return "0.0";
}

std::string QuoteIfNeeded(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

void ComparisonDataset::RebuildItems() {
  items.clear();
  std::unordered_set<std::string> seen;
  for (const MatchRecord& record : records) {
    if (seen.insert(record.item_a).second) items.push_back(record.item_a);
    if (seen.insert(record.item_b).second) items.push_back(record.item_b);
  }
}

std::set<std::string> ComparisonDataset::Raters() const {
  std::set<std::string> raters;
  for (const MatchRecord& record : records) {
    if (record.rater_id) raters.insert(*record.rater_id);
  }
  return raters;
}

ComparisonDataset LoadComparisons(std::istream& in) {
  ComparisonDataset dataset;
  dataset.provenance = Provenance::kIngested;
  std::string line;
  std::size_t line_number = 0;
  bool have_header = false;
  std::size_t n_columns = 0;

  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_number == 1 && line.starts_with("\xEF\xBB\xBF")) {
      line.erase(0, 3);
    }
    if (line.empty()) continue;
    std::vector<std::string> fields = SplitCsvLine(line, line_number);

    if (!have_header) {
      if (fields.size() < 4 || fields.size() > 5) {
        throw ParseError(line_number,
                         "header must be item_a,item_b,outcome,rater_id");
      }
      for (std::size_t i = 0; i < 4; ++i) {
        if (fields[i] != kColumns[i]) {
          throw ParseError(line_number, "missing column '" +
                                            std::string(kColumns[i]) + "'");
        }
      }
      if (fields.size() == 5 && fields[4] != kTimestampColumn) {
        throw ParseError(line_number,
                         "unexpected column '" + fields[4] + "'");
      }
      have_header = true;
      n_columns = fields.size();
      continue;
    }

    if (fields.size() != n_columns) {
      throw ParseError(line_number, "expected " + std::to_string(n_columns) +
                                        " fields, found " +
                                        std::to_string(fields.size()));
    }
    MatchRecord record;
    record.item_a = std::move(fields[0]);
    record.item_b = std::move(fields[1]);
    record.score_a = ParseOutcome(fields[2], line_number);
    if (fields[3].empty()) throw ParseError(line_number, "empty rater_id");
    record.rater_id = std::move(fields[3]);
    if (record.item_a.empty() || record.item_b.empty()) {
      throw ParseError(line_number, "empty item identifier");
    }
    if (record.item_a == record.item_b) {
      throw ParseError(line_number, "item compared with itself");
    }
    dataset.records.push_back(std::move(record));
  }
  if (!have_header) {
    throw ParseError(std::max<std::size_t>(line_number, 1),
                     "missing header row");
  }
  dataset.RebuildItems();
  return dataset;
}

ComparisonDataset LoadComparisonsFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() + "'");
  }
  return LoadComparisons(in);
}

void WriteComparisons(const ComparisonDataset& dataset, std::ostream& out) {
  out << "item_a,item_b,outcome,rater_id\n";
  for (const MatchRecord& record : dataset.records) {
    out << QuoteIfNeeded(record.item_a) << ',' << QuoteIfNeeded(record.item_b)
        << ',' << FormatOutcome(record.score_a) << ','
        << QuoteIfNeeded(record.rater_id.value_or("")) << '\n';
  }
}

ComparisonDataset RestrictToItems(const ComparisonDataset& dataset,
                                  const std::vector<std::string>& subset) {
  const std::unordered_set<std::string> universe(dataset.items.begin(),
                                                 dataset.items.end());
  std::unordered_set<std::string> keep;
  for (const std::string& item : subset) {
    if (!universe.contains(item)) {
      throw std::invalid_argument("item '" + item + "' is not in the dataset");
    }
    keep.insert(item);
  }
  ComparisonDataset out;
  out.provenance = dataset.provenance;
  for (const MatchRecord& record : dataset.records) {
    if (keep.contains(record.item_a) && keep.contains(record.item_b)) {
      out.records.push_back(record);
    }
  }
  // Subset items stay in the universe even when no record survives.
  for (const std::string& item : dataset.items) {
    if (keep.contains(item)) out.items.push_back(item);
  }
  return out;
}

}  // namespace crowdelo
