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

#ifndef FEDMED_STATS_SCATTER_H_
#define FEDMED_STATS_SCATTER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/cohort/table.h"
#include "fedmed/core/registry.h"
#include "json.hpp"

namespace fedmed {

struct GridCell {
  int ix = 0;
  int iy = 0;
  int64_t count = 0;
  friend bool operator==(const GridCell&, const GridCell&) = default;
};

// Two-dimensional box discretization. `cells` lists the non-empty
// releasable cells in (ix, iy) order; suppressed_total is the mass of the
// withheld cells.
struct HistogramGrid {
  std::string x_column;
  std::string y_column;
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;
  int x_bins = 12;
  int y_bins = 12;
  std::vector<GridCell> cells;
  int64_t suppressed_total = 0;
};

// Counts complete-case (x, y) pairs; cells holding fewer than k points are
// dropped and added to suppressed_total.
absl::StatusOr<HistogramGrid> LocalBinnedCounts(const CohortTable& table, HistogramGrid bounds,
                                                int64_t k);

struct ScatterResult {
  std::vector<std::string> dataset_ids;
  std::vector<HistogramGrid> per_site;
  HistogramGrid combined;  // reported cells summed, suppressed totals summed
};

// Two rounds: federated min/max of both columns, then the grid counts.
// Each site releases only its reported cells and its complete-case n; the
// orchestrator derives the suppressed total as n minus the reported mass.
absl::StatusOr<ScatterResult> FederatedBinnedScatter(RoundRunner& runner,
                                                     const std::string& x_column,
                                                     const std::string& y_column, int x_bins = 12,
                                                     int y_bins = 12);

// {x_column, y_column, x_lo, x_hi, y_lo, y_hi, x_bins, y_bins,
//  cells: [{ix, iy, count}], suppressed_total}
nlohmann::json GridToJson(const HistogramGrid& grid);

// Local step "binned_count". Broadcast: {x_lo, x_hi, y_lo, y_hi, x_bins,
// y_bins}; columns: [x, y].
absl::StatusOr<AggregatePayload> BinnedCountStep(const LocalContext& context);

}  // namespace fedmed

#endif  // FEDMED_STATS_SCATTER_H_
