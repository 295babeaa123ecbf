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

#ifndef FEDMED_STATS_MOMENTS_H_
#define FEDMED_STATS_MOMENTS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/cohort/table.h"
#include "fedmed/core/policy.h"
#include "fedmed/core/registry.h"
#include "json.hpp"

namespace fedmed {

// Sufficient statistics of one column over its non-missing cells. Date
// columns are taken as day counts since 1970-01-01.
struct MomentAggregate {
  std::string column;
  int64_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::optional<double> min;  // empty iff n == 0
  std::optional<double> max;

  friend bool operator==(const MomentAggregate&, const MomentAggregate&) = default;
};

// Errors: MissingColumn, NonNumericColumn.
absl::StatusOr<std::vector<MomentAggregate>> LocalMoments(
    const CohortTable& table, const std::vector<std::string>& columns);

// InvalidArgument("ColumnMismatch: ...") for different columns. The empty
// aggregate of the same column is the identity.
absl::StatusOr<MomentAggregate> MergeMoments(const MomentAggregate& a,
                                             const MomentAggregate& b);

std::optional<double> MomentMean(const MomentAggregate& m);
// Sample standard deviation (n - 1 denominator); empty for n < 2.
std::optional<double> MomentSd(const MomentAggregate& m);

// Non-missing values of a numeric or date column, in row order.
absl::StatusOr<std::vector<double>> PresentValues(const CohortTable& table,
                                                  const std::string& column);

// Wire form without n, which travels as a supporting count.
nlohmann::json MomentStatsToJson(const MomentAggregate& m);
absl::StatusOr<MomentAggregate> MomentFromJson(const std::string& column,
                                               const nlohmann::json& stats, int64_t n);

// One "moments" round: per-site aggregates in dataset order, and their merge.
struct MomentRound {
  std::vector<std::string> dataset_ids;
  std::vector<std::vector<MomentAggregate>> per_site;
  std::vector<MomentAggregate> pooled;
};
absl::StatusOr<MomentRound> FederatedMoments(RoundRunner& runner, OpKind op,
                                             const std::vector<std::string>& columns);

// Local step "moments": {stats: {columns: {<col>: {sum, sum_sq, min, max}}},
// supporting_counts: {"n/<col>": n}}.
absl::StatusOr<AggregatePayload> MomentsStep(const LocalContext& context);

}  // namespace fedmed

#endif  // FEDMED_STATS_MOMENTS_H_
