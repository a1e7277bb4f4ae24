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

#include "dpdisc/csv.h"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "dpdisc/error.h"

namespace dpdisc {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> ParseNumber(std::string_view s) {
  s = Trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string LineError(size_t line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

}  // namespace

std::vector<std::string> SplitCsvLine(std::string_view line, size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && Trim(current).empty() && !was_quoted) {
      current.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? current : std::string(Trim(current)));
      current.clear();
      was_quoted = false;
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  Require(!quoted, ErrorCode::kParse, LineError(line_no, "unterminated quote"));
  fields.push_back(was_quoted ? current : std::string(Trim(current)));
  return fields;
}

Table ParseCsv(std::string_view text, CsvReport* report) {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> cells;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (Trim(line).empty()) continue;
    std::vector<std::string> fields = SplitCsvLine(line, line_no);
    if (header.empty()) {
      header = std::move(fields);
      continue;
    }
    Require(fields.size() == header.size(), ErrorCode::kParse,
            LineError(line_no, "expected " + std::to_string(header.size()) +
                                   " fields, found " +
                                   std::to_string(fields.size())));
    for (size_t c = 0; c < fields.size(); ++c) {
      Require(!fields[c].empty(), ErrorCode::kParse,
              LineError(line_no, "empty field in column '" + header[c] + "'"));
    }
    cells.push_back(std::move(fields));
  }
  Require(!header.empty(), ErrorCode::kParse, "missing header row");
  Require(!cells.empty(), ErrorCode::kEmptyData, "no data rows");

  Table table;
  CsvReport local;
  for (size_t c = 0; c < header.size(); ++c) {
    Column column{header[c], {}, false};
    column.values.reserve(cells.size());
    bool numeric = true;
    for (const auto& row : cells) {
      const auto value = ParseNumber(row[c]);
      if (!value) {
        numeric = false;
        break;
      }
      column.values.push_back(*value);
    }
    if (!numeric) {
      column.values.clear();
      column.categorical = true;
      std::map<std::string, double> codes;
      for (const auto& row : cells) {
        const auto [it, inserted] =
            codes.emplace(row[c], static_cast<double>(codes.size()));
        column.values.push_back(it->second);
      }
      local.encoded_columns.push_back(header[c]);
    } else {
      local.numeric_columns.push_back(header[c]);
    }
    table.columns.push_back(std::move(column));
  }
  local.rows = cells.size();
  if (report != nullptr) *report = std::move(local);
  return table;
}

Table LoadCsv(const std::string& path, CsvReport* report) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCsv(buffer.str(), report);
}

void WriteCsv(const Table& table, std::ostream& out) {
  table.Validate();
  for (size_t c = 0; c < table.num_columns(); ++c) {
    if (c > 0) out << ',';
    out << table.columns[c].name;
  }
  out << '\n';
  char buf[32];
  for (size_t r = 0; r < table.num_rows(); ++r) {
    for (size_t c = 0; c < table.num_columns(); ++c) {
      if (c > 0) out << ',';
      const auto [ptr, ec] =
          std::to_chars(buf, buf + sizeof(buf), table.columns[c].values[r]);
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

void WriteCsv(const Table& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  Require(out.good(), ErrorCode::kIo, "cannot write '" + path + "'");
  WriteCsv(table, out);
}

}  // namespace dpdisc
