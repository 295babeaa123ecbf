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

#ifndef FEDMED_PCA_ONEHOT_H_
#define FEDMED_PCA_ONEHOT_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/cohort/table.h"
#include "json.hpp"

namespace fedmed {

// Global category lists, sorted, one per source column. Every level is
// kept; there is no reference level.
struct OneHotEncoding {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> categories;

  size_t size() const;
  // "COLUMN=CATEGORY" in encoding order.
  std::vector<std::string> FeatureNames() const;

  friend bool operator==(const OneHotEncoding&, const OneHotEncoding&) = default;
};

// Categories observed locally. Errors: MissingColumn, NonCategoricalColumn.
absl::StatusOr<std::map<std::string, std::set<std::string>>> LocalCategories(
    const CohortTable& table, const std::vector<std::string>& columns);

// Sorted union of per-site category sets.
OneHotEncoding MergeCategories(const std::vector<std::string>& columns,
                               const std::vector<std::map<std::string, std::set<std::string>>>& sites);

// Encodes one row. nullopt when any source value is missing.
// Errors: InvalidArgument("UnknownCategory: row R column C value V").
absl::StatusOr<std::optional<std::vector<double>>> EncodeRow(const OneHotEncoding& encoding,
                                                             const CohortTable& table,
                                                             size_t row);

nlohmann::json EncodingToJson(const OneHotEncoding& encoding);
absl::StatusOr<OneHotEncoding> EncodingFromJson(const nlohmann::json& j);

}  // namespace fedmed

#endif  // FEDMED_PCA_ONEHOT_H_
