// Copyright 2026 The FedMed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedmed/cohort/csv.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace fedmed {

std::string FormatNumber(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

absl::StatusOr<CohortTable> ParseCsv(std::string_view text, const Schema& schema,
                                     std::string site_id) {
  std::vector<std::string_view> lines;
  for (size_t start = 0;;) {
    const size_t end = text.find('\n', start);
    lines.push_back(text.substr(start, end == std::string_view::npos ? end : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) {
    return absl::InvalidArgumentError("CSV has no header row");
  }

  std::vector<std::string> header = SplitCsvLine(lines[0]);
  std::vector<size_t> source_of(schema.size(), SIZE_MAX);
  std::set<std::string> seen;
  for (size_t i = 0; i < header.size(); ++i) {
    if (!seen.insert(header[i]).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate header column ", header[i]));
    }
    auto idx = schema.IndexOf(header[i]);
    if (!idx) {
      return absl::InvalidArgumentError(
          absl::StrCat("unexpected header column ", header[i]));
    }
    source_of[*idx] = i;
  }
  for (size_t c = 0; c < schema.size(); ++c) {
    if (source_of[c] == SIZE_MAX) {
      return absl::NotFoundError(
          absl::StrCat("MissingColumn: ", schema.column(c).name));
    }
  }

  std::vector<Row> rows;
  rows.reserve(lines.size() - 1);
  for (size_t li = 1; li < lines.size(); ++li) {
    const size_t row_no = li;
    std::vector<std::string> fields = SplitCsvLine(lines[li]);
    if (fields.size() != header.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "row ", row_no, " has ", fields.size(), " fields, header has ",
          header.size()));
    }
    Row row(schema.size());
    for (size_t c = 0; c < schema.size(); ++c) {
      const ColumnSpec& spec = schema.column(c);
      std::string& raw = fields[source_of[c]];
      if (raw.empty()) continue;  // missing
      auto type_error = [&] {
        return absl::InvalidArgumentError(absl::StrCat(
            "TypeParseError: row ", row_no, ", column ", spec.name, " ('", raw, "')"));
      };
      switch (spec.kind) {
        case ColumnKind::kNumeric: {
          double v = 0;
          auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
          if (ec != std::errc() || ptr != raw.data() + raw.size() || !std::isfinite(v)) {
            return type_error();
          }
          row[c] = v;
          break;
        }
        case ColumnKind::kDate: {
          auto d = Date::Parse(raw);
          if (!d.ok()) return type_error();
          row[c] = *d;
          break;
        }
        case ColumnKind::kCategorical:
        case ColumnKind::kIdentifier:
          row[c] = std::move(raw);
          break;
      }
    }
    rows.push_back(std::move(row));
  }
  return CohortTable::Create(schema, std::move(rows), std::move(site_id));
}

absl::StatusOr<CohortTable> LoadCsv(const std::string& path, const Schema& schema,
                                    std::string site_id) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseCsv(*text, schema, std::move(site_id));
}

std::string WriteCsv(const CohortTable& table) {
  std::string out;
  std::vector<std::string> names;
  for (const ColumnSpec& c : table.schema().columns()) names.push_back(CsvEscape(c.name));
  absl::StrAppend(&out, absl::StrJoin(names, ","), "\n");
  for (const Row& row : table.rows()) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out.push_back(',');
      const Cell& cell = row[c];
      if (const double* v = std::get_if<double>(&cell)) {
        out += FormatNumber(*v);
      } else if (const std::string* s = std::get_if<std::string>(&cell)) {
        out += CsvEscape(*s);
      } else if (const Date* d = std::get_if<Date>(&cell)) {
        out += d->ToString();
      }
    }
    out.push_back('\n');
  }
  return out;
}

absl::Status WriteCsvFile(const CohortTable& table, const std::string& path) {
  return WriteFile(path, WriteCsv(table));
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) return absl::DataLossError(absl::StrCat("short write to ", path));
  return absl::OkStatus();
}

}  // namespace fedmed
