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

#ifndef FEDMED_STATS_TABLEONE_H_
#define FEDMED_STATS_TABLEONE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/core/registry.h"
#include "fedmed/stats/quantiles.h"
#include "json.hpp"

namespace fedmed {

// Date rows carry day counts since 1970-01-01, quantiles rounded to whole
// days, and no mean or sd.
struct TableOneRow {
  std::string variable;
  bool is_date = false;
  int64_t n = 0;
  std::optional<double> mean;
  std::optional<double> sd;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Two rounds over all requested columns. Errors: PolicyDenied,
// MissingColumn (as a gateway failure), DegenerateRange for empty columns.
absl::StatusOr<std::vector<TableOneRow>> FederatedTableOne(
    RoundRunner& runner, const std::vector<std::string>& numeric_columns,
    const std::vector<std::string>& date_columns, int bins = kDefaultQuantileBins);

struct FiveNumber {
  std::string variable;
  int64_t n = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Sorted-order quantile x_(ceil(q n)) of a non-empty sample.
double ExactQuantile(std::vector<double> values, double q);
absl::StatusOr<FiveNumber> LocalFiveNumber(const std::vector<double>& values,
                                           const std::string& variable);

struct BoxplotResult {
  std::vector<FiveNumber> federated;
  std::vector<std::string> dataset_ids;
  std::vector<std::vector<FiveNumber>> per_site;  // empty unless requested
};

// Federated five-number summaries; with per_site, each site also computes
// its own exactly, released only when it has min_cohort_size values.
absl::StatusOr<BoxplotResult> FederatedBoxplot(RoundRunner& runner,
                                               const std::vector<std::string>& columns,
                                               bool per_site, int bins = kDefaultQuantileBins);

std::string TableOneCsv(const std::vector<TableOneRow>& rows);
std::string TableOneDatesCsv(const std::vector<TableOneRow>& rows);
nlohmann::json BoxplotToJson(const BoxplotResult& result);

// Local step "five_number": {stats: {<col>: {min, q1, median, q3, max}},
// supporting_counts: {"n/<col>": n}}.
absl::StatusOr<AggregatePayload> FiveNumberStep(const LocalContext& context);

}  // namespace fedmed

#endif  // FEDMED_STATS_TABLEONE_H_
