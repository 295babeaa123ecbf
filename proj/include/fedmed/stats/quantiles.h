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

#ifndef FEDMED_STATS_QUANTILES_H_
#define FEDMED_STATS_QUANTILES_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/core/registry.h"

namespace fedmed {

inline constexpr int kDefaultQuantileBins = 512;

// Fixed-width cell of v on [lo, hi] split into `bins` cells; hi falls in
// the last cell. Every value maps to cell 0 when hi <= lo.
size_t BinIndex(double v, double lo, double hi, int bins);

// A site's histogram after suppression: groups of consecutive base cells,
// group g covering [ends[g-1], ends[g]) with counts[g] values.
struct GroupedHistogram {
  std::vector<size_t> ends;
  std::vector<int64_t> counts;

  friend bool operator==(const GroupedHistogram&, const GroupedHistogram&) = default;
};

// Counts values per base cell, then merges cells until each group count is
// 0 or >= k. PermissionDenied when the values themselves number in (0, k).
absl::StatusOr<GroupedHistogram> LocalHistogram(const std::vector<double>& values, double lo,
                                                double hi, int bins, int64_t k);

// Combines site histograms into a piecewise-linear cumulative count over the
// base cells (a group's count spread evenly over its cells) and reads off
// each quantile by linear interpolation inside the cell where the
// cumulative count reaches q * N. With ungrouped histograms the estimate
// lies in the same cell as the sorted-order quantile x_(ceil(qN)), so the
// error is at most (hi - lo) / bins.
// FailedPrecondition("DegenerateRange: ...") when there are no values.
absl::StatusOr<std::vector<double>> QuantilesFromHistograms(
    const std::vector<GroupedHistogram>& sites, double lo, double hi, int bins,
    const std::vector<double>& probs);

// Two rounds: moments (for min, max and n), then histograms on [min, max].
// A constant column yields its value for every probability.
absl::StatusOr<std::map<std::string, std::vector<double>>> FederatedQuantiles(
    RoundRunner& runner, OpKind op, const std::vector<std::string>& columns,
    const std::vector<double>& probs = {0.25, 0.5, 0.75}, int bins = kDefaultQuantileBins);

// Second round only, for callers that already hold the pooled range.
// `ranges` maps column -> {lo, hi, n}.
struct ColumnRange {
  double lo = 0.0;
  double hi = 0.0;
  int64_t n = 0;
};
absl::StatusOr<std::map<std::string, std::vector<double>>> QuantilesForRanges(
    RoundRunner& runner, OpKind op, const std::map<std::string, ColumnRange>& ranges,
    const std::vector<double>& probs, int bins);

// Local step "histogram". Broadcast: {bins, ranges: {<col>: [lo, hi]}}.
// Releases {stats: {<col>: {ends}}, counts: {<col>: [...]}}.
absl::StatusOr<AggregatePayload> HistogramStep(const LocalContext& context);

}  // namespace fedmed

#endif  // FEDMED_STATS_QUANTILES_H_
