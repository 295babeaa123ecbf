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

#include "fedmed/stats/quantiles.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "fedmed/core/privacy.h"
#include "fedmed/stats/moments.h"

namespace fedmed {

using nlohmann::json;

size_t BinIndex(double v, double lo, double hi, int bins) {
  if (!(hi > lo) || bins <= 1) return 0;
  const double scaled = std::floor((v - lo) / (hi - lo) * bins);
  if (scaled <= 0.0) return 0;
  return std::min(static_cast<size_t>(scaled), static_cast<size_t>(bins - 1));
}

absl::StatusOr<GroupedHistogram> LocalHistogram(const std::vector<double>& values, double lo,
                                                double hi, int bins, int64_t k) {
  if (bins < 1) return absl::InvalidArgumentError("bins must be >= 1");
  std::vector<std::vector<int64_t>> cells(static_cast<size_t>(bins), std::vector<int64_t>{0});
  for (double v : values) ++cells[BinIndex(v, lo, hi, bins)][0];
  auto ends = MergeToThreshold(cells, k);
  if (!ends.ok()) return ends.status();
  GroupedHistogram h;
  h.ends = *ends;
  for (const auto& g : SumGroups(cells, h.ends)) h.counts.push_back(g[0]);
  return h;
}

absl::StatusOr<std::vector<double>> QuantilesFromHistograms(
    const std::vector<GroupedHistogram>& sites, double lo, double hi, int bins,
    const std::vector<double>& probs) {
  const size_t nbins = static_cast<size_t>(bins);
  std::vector<double> density(nbins, 0.0);
  double total = 0.0;
  for (const GroupedHistogram& h : sites) {
    if (h.ends.size() != h.counts.size() || (!h.ends.empty() && h.ends.back() != nbins)) {
      return absl::InvalidArgumentError("PayloadInvalid: histogram groups do not cover the grid");
    }
    size_t begin = 0;
    for (size_t g = 0; g < h.ends.size(); ++g) {
      if (h.ends[g] <= begin) {
        return absl::InvalidArgumentError("PayloadInvalid: histogram groups out of order");
      }
      const double share = static_cast<double>(h.counts[g]) /
                           static_cast<double>(h.ends[g] - begin);
      for (size_t j = begin; j < h.ends[g]; ++j) density[j] += share;
      total += static_cast<double>(h.counts[g]);
      begin = h.ends[g];
    }
  }
  if (total <= 0.0) return absl::FailedPreconditionError("DegenerateRange: no values");
  if (!(hi > lo)) return std::vector<double>(probs.size(), lo);

  std::vector<double> cumulative(nbins + 1, 0.0);
  for (size_t j = 0; j < nbins; ++j) cumulative[j + 1] = cumulative[j] + density[j];
  const double width = (hi - lo) / bins;
  const double slack = 1e-9 * std::max(1.0, total);

  std::vector<double> out;
  for (double q : probs) {
    const double target = q * total;
    size_t j = 0;
    while (j + 1 < nbins && cumulative[j + 1] < target - slack) ++j;
    const double mass = cumulative[j + 1] - cumulative[j];
    const double frac = mass > 0.0 ? std::clamp((target - cumulative[j]) / mass, 0.0, 1.0) : 0.0;
    out.push_back(std::clamp(lo + width * (static_cast<double>(j) + frac), lo, hi));
  }
  return out;
}

absl::StatusOr<AggregatePayload> HistogramStep(const LocalContext& context) {
  AggregatePayload payload;
  int bins = 0;
  try {
    bins = context.broadcast.at("bins").get<int>();
    for (const auto& [column, range] : context.broadcast.at("ranges").items()) {
      if (std::find(context.columns.begin(), context.columns.end(), column) ==
          context.columns.end()) {
        return absl::InvalidArgumentError(
            absl::StrCat("PayloadInvalid: column '", column, "' not declared"));
      }
      auto values = PresentValues(context.table, column);
      if (!values.ok()) return values.status();
      auto h = LocalHistogram(*values, range.at(0).get<double>(), range.at(1).get<double>(),
                              bins, context.policy.min_cell_count);
      if (!h.ok()) return h.status();
      payload.stats[column] = {{"ends", h->ends}};
      payload.counts[column] = h->counts;
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
  }
  return payload;
}

absl::StatusOr<std::map<std::string, std::vector<double>>> QuantilesForRanges(
    RoundRunner& runner, OpKind op, const std::map<std::string, ColumnRange>& ranges,
    const std::vector<double>& probs, int bins) {
  std::map<std::string, std::vector<double>> out;
  json broadcast_ranges = json::object();
  std::vector<std::string> columns;
  for (const auto& [column, r] : ranges) {
    if (r.n == 0) {
      return absl::FailedPreconditionError(absl::StrCat("DegenerateRange: ", column, " has no values"));
    }
    if (!(r.hi > r.lo)) {
      out[column] = std::vector<double>(probs.size(), r.lo);
      continue;
    }
    broadcast_ranges[column] = {r.lo, r.hi};
    columns.push_back(column);
  }
  if (columns.empty()) return out;

  auto sites = runner.RunRound(op, "histogram", columns,
                               json{{"bins", bins}, {"ranges", broadcast_ranges}});
  if (!sites.ok()) return sites.status();
  for (const std::string& column : columns) {
    std::vector<GroupedHistogram> histograms;
    for (const SitePayload& site : *sites) {
      GroupedHistogram h;
      try {
        h.ends = site.payload.stats.at(column).at("ends").get<std::vector<size_t>>();
        h.counts = site.payload.counts.at(column).get<std::vector<int64_t>>();
      } catch (const json::exception& e) {
        return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
      }
      histograms.push_back(std::move(h));
    }
    const ColumnRange& r = ranges.at(column);
    auto q = QuantilesFromHistograms(histograms, r.lo, r.hi, bins, probs);
    if (!q.ok()) return q.status();
    out[column] = *std::move(q);
  }
  return out;
}

absl::StatusOr<std::map<std::string, std::vector<double>>> FederatedQuantiles(
    RoundRunner& runner, OpKind op, const std::vector<std::string>& columns,
    const std::vector<double>& probs, int bins) {
  auto moments = FederatedMoments(runner, op, columns);
  if (!moments.ok()) return moments.status();
  std::map<std::string, ColumnRange> ranges;
  for (const MomentAggregate& m : moments->pooled) {
    ranges[m.column] = {m.min.value_or(0.0), m.max.value_or(0.0), m.n};
  }
  return QuantilesForRanges(runner, op, ranges, probs, bins);
}

}  // namespace fedmed
