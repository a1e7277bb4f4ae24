//
// Copyright 2026 The dpdisc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Minimal CSV reading and writing for numeric tables.

#ifndef DPDISC_CSV_H_
#define DPDISC_CSV_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dpdisc/table.h"

namespace dpdisc {

struct CsvReport {
  size_t rows = 0;
  std::vector<std::string> numeric_columns;
  std::vector<std::string> encoded_columns;
};

// Header row required, comma separated, '.' decimals, double quotes allowed
// around fields. A column with any non-numeric cell is ordinal-encoded by
// first appearance and marked categorical. Parse errors name the line.
Table ParseCsv(std::string_view text, CsvReport* report = nullptr);
Table LoadCsv(const std::string& path, CsvReport* report = nullptr);

// Round-trip exact (17 significant digits).
void WriteCsv(const Table& table, std::ostream& out);
void WriteCsv(const Table& table, const std::string& path);

// Splits one CSV line; exposed for tests.
std::vector<std::string> SplitCsvLine(std::string_view line, size_t line_no);

}  // namespace dpdisc

#endif  // DPDISC_CSV_H_
