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

#include "fedmed/cohort/table.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace fedmed {
namespace {

absl::Status CheckCell(const ColumnSpec& spec, const Cell& cell, size_t row) {
  auto bad = [&](const std::string& why) {
    return absl::InvalidArgumentError(absl::StrCat(
        "TypeParseError: row ", row, ", column ", spec.name, " (", why, ")"));
  };
  if (IsMissing(cell)) {
    if (spec.kind == ColumnKind::kIdentifier) return bad("identifier is missing");
    return absl::OkStatus();
  }
  switch (spec.kind) {
    case ColumnKind::kNumeric: {
      const double* v = std::get_if<double>(&cell);
      if (v == nullptr) return bad("expected number");
      if (!std::isfinite(*v)) return bad("non-finite number");
      return absl::OkStatus();
    }
    case ColumnKind::kDate:
      if (!std::holds_alternative<Date>(cell)) return bad("expected date");
      return absl::OkStatus();
    case ColumnKind::kIdentifier:
      if (!std::holds_alternative<std::string>(cell)) return bad("expected text");
      return absl::OkStatus();
    case ColumnKind::kCategorical: {
      const std::string* s = std::get_if<std::string>(&cell);
      if (s == nullptr) return bad("expected category label");
      if (std::find(spec.categories.begin(), spec.categories.end(), *s) ==
          spec.categories.end()) {
        return bad(absl::StrCat("undeclared category '", *s, "'"));
      }
      return absl::OkStatus();
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<CohortTable> CohortTable::Create(Schema schema, std::vector<Row> rows,
                                                std::string site_id) {
  std::vector<std::set<std::string>> seen(schema.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != schema.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "row ", r + 1, " has ", rows[r].size(), " cells, schema has ", schema.size()));
    }
    for (size_t c = 0; c < schema.size(); ++c) {
      const ColumnSpec& spec = schema.column(c);
      if (absl::Status s = CheckCell(spec, rows[r][c], r + 1); !s.ok()) return s;
      if (spec.kind == ColumnKind::kIdentifier) {
        const auto& id = std::get<std::string>(rows[r][c]);
        if (!seen[c].insert(id).second) {
          return absl::AlreadyExistsError(
              absl::StrCat("DuplicatePid: ", spec.name, " '", id, "' at row ", r + 1));
        }
      }
    }
  }
  CohortTable table;
  table.schema_ = std::move(schema);
  table.rows_ = std::move(rows);
  table.site_id_ = std::move(site_id);
  return table;
}

absl::StatusOr<std::vector<std::optional<double>>> CohortTable::NumericColumn(
    std::string_view name) const {
  auto idx = schema_.Require(name);
  if (!idx.ok()) return idx.status();
  const ColumnSpec& spec = schema_.column(*idx);
  if (spec.kind != ColumnKind::kNumeric && spec.kind != ColumnKind::kDate) {
    return absl::InvalidArgumentError(absl::StrCat(
        "NonNumericColumn: ", std::string(name), " is ",
        std::string(ColumnKindName(spec.kind))));
  }
  std::vector<std::optional<double>> out;
  out.reserve(rows_.size());
  for (const Row& row : rows_) {
    const Cell& cell = row[*idx];
    if (const double* v = std::get_if<double>(&cell)) {
      out.emplace_back(*v);
    } else if (const Date* d = std::get_if<Date>(&cell)) {
      out.emplace_back(static_cast<double>(d->ToDays()));
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

absl::StatusOr<std::vector<std::optional<std::string>>> CohortTable::CategoricalColumn(
    std::string_view name) const {
  auto idx = schema_.Require(name);
  if (!idx.ok()) return idx.status();
  const ColumnSpec& spec = schema_.column(*idx);
  if (spec.kind != ColumnKind::kCategorical) {
    return absl::InvalidArgumentError(absl::StrCat(
        "NonCategoricalColumn: ", std::string(name), " is ",
        std::string(ColumnKindName(spec.kind))));
  }
  std::vector<std::optional<std::string>> out;
  out.reserve(rows_.size());
  for (const Row& row : rows_) {
    if (const auto* s = std::get_if<std::string>(&row[*idx])) {
      out.emplace_back(*s);
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

absl::StatusOr<CohortTable> ConcatTables(const std::vector<CohortTable>& tables,
                                         std::string site_id) {
  if (tables.empty()) {
    return CohortTable::Create(Schema(), {}, std::move(site_id));
  }
  std::vector<Row> rows;
  for (const CohortTable& t : tables) {
    if (!(t.schema() == tables.front().schema())) {
      return absl::InvalidArgumentError(
          absl::StrCat("schema of ", t.site_id(), " differs from ",
                       tables.front().site_id()));
    }
    rows.insert(rows.end(), t.rows().begin(), t.rows().end());
  }
  return CohortTable::Create(tables.front().schema(), std::move(rows),
                             std::move(site_id));
}

}  // namespace fedmed
