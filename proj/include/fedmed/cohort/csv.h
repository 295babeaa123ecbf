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

#ifndef FEDMED_COHORT_CSV_H_
#define FEDMED_COHORT_CSV_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fedmed/cohort/table.h"

namespace fedmed {

// Comma-separated, header row with the schema's column names (any order, as a
// set), empty cell = missing, dates as YYYY-MM-DD. Data rows are numbered from
// 1 in TypeParseError messages.
absl::StatusOr<CohortTable> ParseCsv(std::string_view text, const Schema& schema,
                                     std::string site_id);
absl::StatusOr<CohortTable> LoadCsv(const std::string& path, const Schema& schema,
                                    std::string site_id);

// Writes columns in schema order. Numbers use the shortest representation
// that round-trips, so ParseCsv(WriteCsv(t)) == t.
std::string WriteCsv(const CohortTable& table);
absl::Status WriteCsvFile(const CohortTable& table, const std::string& path);

std::string FormatNumber(double v);
std::vector<std::string> SplitCsvLine(std::string_view line);
std::string CsvEscape(std::string_view field);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view contents);

}  // namespace fedmed

#endif  // FEDMED_COHORT_CSV_H_
