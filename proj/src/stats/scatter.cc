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

#include "fedmed/stats/scatter.h"

#include <map>
#include <utility>

#include "absl/strings/str_cat.h"
#include "fedmed/stats/moments.h"
#include "fedmed/stats/quantiles.h"

namespace fedmed {

using nlohmann::json;

absl::StatusOr<HistogramGrid> LocalBinnedCounts(const CohortTable& table, HistogramGrid grid,
                                                int64_t k) {
  if (grid.x_bins < 1 || grid.y_bins < 1) {
    return absl::InvalidArgumentError("bins must be >= 1");
  }
  auto xs = table.NumericColumn(grid.x_column);
  if (!xs.ok()) return xs.status();
  auto ys = table.NumericColumn(grid.y_column);
  if (!ys.ok()) return ys.status();
  std::map<std::pair<int, int>, int64_t> counts;
  for (size_t r = 0; r < xs->size(); ++r) {
    if (!(*xs)[r] || !(*ys)[r]) continue;
    const int ix = static_cast<int>(BinIndex(*(*xs)[r], grid.x_lo, grid.x_hi, grid.x_bins));
    const int iy = static_cast<int>(BinIndex(*(*ys)[r], grid.y_lo, grid.y_hi, grid.y_bins));
    ++counts[{ix, iy}];
  }
  grid.cells.clear();
  grid.suppressed_total = 0;
  for (const auto& [cell, count] : counts) {
    if (count >= k) {
      grid.cells.push_back({cell.first, cell.second, count});
    } else {
      grid.suppressed_total += count;
    }
  }
  return grid;
}

json GridToJson(const HistogramGrid& grid) {
  json cells = json::array();
  for (const GridCell& c : grid.cells) {
    cells.push_back({{"ix", c.ix}, {"iy", c.iy}, {"count", c.count}});
  }
  return {{"x_column", grid.x_column}, {"y_column", grid.y_column},
          {"x_lo", grid.x_lo},         {"x_hi", grid.x_hi},
          {"y_lo", grid.y_lo},         {"y_hi", grid.y_hi},
          {"x_bins", grid.x_bins},     {"y_bins", grid.y_bins},
          {"cells", cells},            {"suppressed_total", grid.suppressed_total}};
}

absl::StatusOr<AggregatePayload> BinnedCountStep(const LocalContext& context) {
  if (context.columns.size() != 2) {
    return absl::InvalidArgumentError("PayloadInvalid: binned_count needs two columns");
  }
  HistogramGrid grid;
  grid.x_column = context.columns[0];
  grid.y_column = context.columns[1];
  try {
    const json& b = context.broadcast;
    grid.x_lo = b.at("x_lo").get<double>();
    grid.x_hi = b.at("x_hi").get<double>();
    grid.y_lo = b.at("y_lo").get<double>();
    grid.y_hi = b.at("y_hi").get<double>();
    grid.x_bins = b.at("x_bins").get<int>();
    grid.y_bins = b.at("y_bins").get<int>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
  }
  auto local = LocalBinnedCounts(context.table, grid, context.policy.min_cell_count);
  if (!local.ok()) return local.status();
  int64_t n = local->suppressed_total;
  json index = json::array();
  std::vector<int64_t> counts;
  for (const GridCell& c : local->cells) {
    index.push_back({c.ix, c.iy});
    counts.push_back(c.count);
    n += c.count;
  }
  AggregatePayload payload;
  payload.stats["cells"] = std::move(index);
  payload.counts["cells"] = std::move(counts);
  payload.supporting_counts["n"] = n;
  return payload;
}

absl::StatusOr<ScatterResult> FederatedBinnedScatter(RoundRunner& runner,
                                                     const std::string& x_column,
                                                     const std::string& y_column, int x_bins,
                                                     int y_bins) {
  auto moments = FederatedMoments(runner, OpKind::kBinnedCount, {x_column, y_column});
  if (!moments.ok()) return moments.status();
  const MomentAggregate& mx = moments->pooled[0];
  const MomentAggregate& my = moments->pooled[1];
  if (mx.n == 0 || my.n == 0) {
    return absl::FailedPreconditionError("DegenerateRange: scatter columns have no values");
  }
  HistogramGrid bounds;
  bounds.x_column = x_column;
  bounds.y_column = y_column;
  bounds.x_lo = *mx.min;
  bounds.x_hi = *mx.max;
  bounds.y_lo = *my.min;
  bounds.y_hi = *my.max;
  bounds.x_bins = x_bins;
  bounds.y_bins = y_bins;

  auto sites = runner.RunRound(OpKind::kBinnedCount, "binned_count", {x_column, y_column},
                               json{{"x_lo", bounds.x_lo},
                                    {"x_hi", bounds.x_hi},
                                    {"y_lo", bounds.y_lo},
                                    {"y_hi", bounds.y_hi},
                                    {"x_bins", x_bins},
                                    {"y_bins", y_bins}});
  if (!sites.ok()) return sites.status();

  ScatterResult result;
  result.combined = bounds;
  std::map<std::pair<int, int>, int64_t> combined;
  for (const SitePayload& site : *sites) {
    HistogramGrid grid = bounds;
    int64_t reported = 0;
    try {
      const json& index = site.payload.stats.at("cells");
      const auto counts = site.payload.counts.at("cells").get<std::vector<int64_t>>();
      if (index.size() != counts.size()) {
        return absl::InvalidArgumentError("PayloadInvalid: cell index/count mismatch");
      }
      for (size_t i = 0; i < counts.size(); ++i) {
        GridCell cell{index.at(i).at(0).get<int>(), index.at(i).at(1).get<int>(), counts[i]};
        grid.cells.push_back(cell);
        combined[{cell.ix, cell.iy}] += cell.count;
        reported += cell.count;
      }
      grid.suppressed_total = site.payload.supporting_counts.at("n") - reported;
    } catch (const std::exception& e) {
      return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
    }
    result.combined.suppressed_total += grid.suppressed_total;
    result.dataset_ids.push_back(site.dataset_id);
    result.per_site.push_back(std::move(grid));
  }
  for (const auto& [cell, count] : combined) {
    result.combined.cells.push_back({cell.first, cell.second, count});
  }
  return result;
}

}  // namespace fedmed
