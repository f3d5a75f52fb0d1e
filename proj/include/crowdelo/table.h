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

// Flat result tables written as CSV or as a JSON array of row objects.
// Doubles use the shortest representation that round-trips, so output bytes
// are a pure function of the values.

#ifndef CROWDELO_TABLE_H_
#define CROWDELO_TABLE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace crowdelo {

// An empty cell is written as an empty CSV field or JSON null.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

Cell OptionalCell(const std::optional<double>& value);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  // Throws std::invalid_argument when the row width differs from columns.
  void AddRow(std::vector<Cell> row);
};

enum class OutputFormat { kCsv, kJson };

std::string FormatDouble(double value);

void WriteCsv(const Table& table, std::ostream& out);
void WriteJson(const Table& table, std::ostream& out);
void WriteTable(const Table& table, OutputFormat format, std::ostream& out);

}  // namespace crowdelo

#endif  // CROWDELO_TABLE_H_
