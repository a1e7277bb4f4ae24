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

#ifndef DPDISC_TABLE_H_
#define DPDISC_TABLE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dpdisc {

// A named column of reals. Categorical columns hold ordinal codes
// 0..k-1 and are passed through the pipeline without discretization.
struct Column {
  std::string name;
  std::vector<double> values;
  bool categorical = false;
};

// Column-major table; all columns share one length.
struct Table {
  std::vector<Column> columns;

  size_t num_rows() const {
    return columns.empty() ? 0 : columns.front().values.size();
  }
  size_t num_columns() const { return columns.size(); }

  // Throws kLengthMismatch on ragged columns.
  void Validate() const;
  std::optional<size_t> IndexOf(std::string_view name) const;
  const Column& at(std::string_view name) const;
  std::vector<double> Row(size_t row) const;
  Table SelectRows(const std::vector<size_t>& rows) const;
  Table WithoutRow(size_t row) const;
  Table WithoutColumn(std::string_view name) const;
};

}  // namespace dpdisc

#endif  // DPDISC_TABLE_H_
