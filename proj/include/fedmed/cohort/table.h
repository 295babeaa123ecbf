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

#ifndef FEDMED_COHORT_TABLE_H_
#define FEDMED_COHORT_TABLE_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/cohort/date.h"
#include "fedmed/cohort/schema.h"

namespace fedmed {

// std::monostate is the explicit missing marker.
using Cell = std::variant<std::monostate, double, std::string, Date>;
using Row = std::vector<Cell>;

inline bool IsMissing(const Cell& c) {
  return std::holds_alternative<std::monostate>(c);
}

// One site's tabular clinical dataset, one row per subject. Immutable once
// created, so it can be shared read-only across gateway workers.
class CohortTable {
 public:
  CohortTable() = default;

  // Validates every row against `schema`: arity, cell kinds, finite numerics,
  // declared categories, and unique non-missing identifier values.
  static absl::StatusOr<CohortTable> Create(Schema schema, std::vector<Row> rows,
                                            std::string site_id);

  const Schema& schema() const { return schema_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::string& site_id() const { return site_id_; }
  size_t num_rows() const { return rows_.size(); }

  // Numeric view of a numeric or date column (dates as days since epoch).
  // Errors: NotFound("MissingColumn: ..."), InvalidArgument("NonNumericColumn: ...").
  absl::StatusOr<std::vector<std::optional<double>>> NumericColumn(
      std::string_view name) const;
  // Labels of a categorical column. Errors: MissingColumn, NonCategoricalColumn.
  absl::StatusOr<std::vector<std::optional<std::string>>> CategoricalColumn(
      std::string_view name) const;

  friend bool operator==(const CohortTable&, const CohortTable&) = default;

 private:
  Schema schema_;
  std::vector<Row> rows_;
  std::string site_id_;
};

// Concatenates tables sharing one schema.
absl::StatusOr<CohortTable> ConcatTables(const std::vector<CohortTable>& tables,
                                         std::string site_id);

}  // namespace fedmed

#endif  // FEDMED_COHORT_TABLE_H_
