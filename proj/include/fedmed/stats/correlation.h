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

#ifndef FEDMED_STATS_CORRELATION_H_
#define FEDMED_STATS_CORRELATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/cohort/table.h"
#include "fedmed/core/matrix.h"
#include "fedmed/core/registry.h"

namespace fedmed {

// Complete-case sums over an ordered column list: sum[i] = sum of x_i and
// cross(i, j) = sum of x_i * x_j (so the diagonal holds the sums of squares).
struct CorrelationAccumulator {
  std::vector<std::string> columns;
  int64_t n = 0;
  std::vector<double> sum;
  Matrix cross;

  friend bool operator==(const CorrelationAccumulator&, const CorrelationAccumulator&) = default;
};

CorrelationAccumulator EmptyAccumulator(const std::vector<std::string>& columns);

// Rows with any requested column missing are skipped.
// Errors: MissingColumn, NonNumericColumn.
absl::StatusOr<CorrelationAccumulator> LocalCrossProducts(const CohortTable& table,
                                                          const std::vector<std::string>& columns);

// InvalidArgument("ColumnMismatch: ...") unless both cover the same columns.
absl::StatusOr<CorrelationAccumulator> MergeAccumulators(const CorrelationAccumulator& a,
                                                         const CorrelationAccumulator& b);

// Pearson matrix; an entry is empty when n < 2 or either column has zero
// variance. The diagonal is exactly 1 where defined.
using CorrelationValues = std::vector<std::vector<std::optional<double>>>;
CorrelationValues PearsonFromSums(const CorrelationAccumulator& acc);

struct CorrelationResult {
  std::vector<std::string> columns;
  std::vector<std::string> dataset_ids;
  std::vector<CorrelationValues> per_site;
  CorrelationValues pooled;
  int64_t n = 0;
};

// One round. FailedPrecondition("DegenerateVariance: <col>") when a column
// has no pooled variance.
absl::StatusOr<CorrelationResult> FederatedCorrelation(RoundRunner& runner,
                                                       const std::vector<std::string>& columns);

// Header ",<col>..." then one row per column; undefined entries are "NA".
std::string CorrelationCsv(const std::vector<std::string>& columns,
                           const CorrelationValues& values);

// Local step "crossproducts": {stats: {sum, cross}, supporting_counts: {n}}.
absl::StatusOr<AggregatePayload> CrossProductsStep(const LocalContext& context);

}  // namespace fedmed

#endif  // FEDMED_STATS_CORRELATION_H_
