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

#include "dpdisc/table.h"

#include "dpdisc/error.h"

namespace dpdisc {

void Table::Validate() const {
  for (const Column& c : columns) {
    Require(c.values.size() == num_rows(), ErrorCode::kLengthMismatch,
            "column '" + c.name + "' has " + std::to_string(c.values.size()) +
                " rows, expected " + std::to_string(num_rows()));
  }
}

std::optional<size_t> Table::IndexOf(std::string_view name) const {
  for (size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  return std::nullopt;
}

const Column& Table::at(std::string_view name) const {
  const auto index = IndexOf(name);
  Require(index.has_value(), ErrorCode::kInvalidParameter,
          "no column named '" + std::string(name) + "'");
  return columns[*index];
}

std::vector<double> Table::Row(size_t row) const {
  std::vector<double> out;
  out.reserve(columns.size());
  for (const Column& c : columns) out.push_back(c.values.at(row));
  return out;
}

Table Table::SelectRows(const std::vector<size_t>& rows) const {
  Table out;
  for (const Column& c : columns) {
    Column selected{c.name, {}, c.categorical};
    selected.values.reserve(rows.size());
    for (size_t r : rows) selected.values.push_back(c.values.at(r));
    out.columns.push_back(std::move(selected));
  }
  return out;
}

Table Table::WithoutRow(size_t row) const {
  Table out = *this;
  for (Column& c : out.columns) {
    c.values.erase(c.values.begin() + static_cast<std::ptrdiff_t>(row));
  }
  return out;
}

Table Table::WithoutColumn(std::string_view name) const {
  Table out;
  for (const Column& c : columns) {
    if (c.name != name) out.columns.push_back(c);
  }
  return out;
}

}  // namespace dpdisc
