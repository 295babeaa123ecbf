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

#include "fedmed/surv/km.h"

#include <algorithm>
#include <set>

#include "absl/strings/str_cat.h"
#include "fedmed/core/privacy.h"

namespace fedmed {
namespace {

using nlohmann::json;

absl::StatusOr<std::vector<SurvivalRecord>> RecordsFor(const LocalContext& context) {
  return DeriveSurvival(context.table,
                        context.broadcast.value("event_threshold", kDefaultEventThreshold));
}

std::vector<int64_t> RegularGrid(int64_t width, int64_t intervals) {
  std::vector<int64_t> b;
  for (int64_t j = 0; j <= intervals; ++j) b.push_back(j * width);
  return b;
}

}  // namespace

int64_t IntervalsFor(int64_t max_time, int64_t width) { return max_time / width + 1; }

std::vector<IntervalCounts> CountsOnGrid(const std::vector<SurvivalRecord>& records,
                                         const std::vector<int64_t>& boundaries) {
  std::vector<IntervalCounts> out;
  if (boundaries.size() < 2) return out;
  for (size_t j = 0; j + 1 < boundaries.size(); ++j) {
    out.push_back({boundaries[j], boundaries[j + 1], 0, 0, 0});
  }
  for (const SurvivalRecord& r : records) {
    if (r.time < boundaries.front() || r.time >= boundaries.back()) continue;
    const size_t j = static_cast<size_t>(
        std::upper_bound(boundaries.begin(), boundaries.end(), r.time) - boundaries.begin() - 1);
    ++(r.event ? out[j].d : out[j].c);
  }
  int64_t at_risk = 0;
  for (size_t j = out.size(); j-- > 0;) {
    at_risk += out[j].d + out[j].c;
    out[j].n_at_risk = at_risk;
  }
  return out;
}

absl::StatusOr<std::vector<IntervalCounts>> LocalIntervalCounts(
    const std::vector<SurvivalRecord>& records, int64_t width, int64_t intervals, int64_t k) {
  const std::vector<IntervalCounts> base = CountsOnGrid(records, RegularGrid(width, intervals));
  std::vector<std::vector<int64_t>> cells;
  for (const IntervalCounts& ic : base) cells.push_back({ic.d, ic.c});
  auto ends = MergeToThreshold(cells, k);
  if (!ends.ok()) return ends.status();
  std::vector<int64_t> boundaries = {0};
  for (size_t e : *ends) boundaries.push_back(static_cast<int64_t>(e) * width);
  return CountsOnGrid(records, boundaries);
}

KaplanMeierCurve KaplanMeierFromCounts(const std::vector<IntervalCounts>& counts) {
  KaplanMeierCurve curve;
  double s = 1.0;
  for (const IntervalCounts& ic : counts) {
    if (ic.n_at_risk > 0) {
      s *= 1.0 - static_cast<double>(ic.d) / static_cast<double>(ic.n_at_risk);
    }
    curve.intervals.push_back({ic.t_lo, ic.t_hi, ic.d, ic.c, ic.n_at_risk, s});
  }
  return curve;
}

json KmToJson(const KaplanMeierCurve& curve) {
  json intervals = json::array();
  for (const KmPoint& p : curve.intervals) {
    intervals.push_back(
        {{"t_lo", p.t_lo}, {"t_hi", p.t_hi}, {"d", p.d}, {"c", p.c}, {"n", p.n}, {"S", p.survival}});
  }
  return {{"intervals", intervals}};
}

absl::StatusOr<AggregatePayload> KmMaxTimeStep(const LocalContext& context) {
  auto records = RecordsFor(context);
  if (!records.ok()) return records.status();
  int64_t max_time = 0;
  for (const SurvivalRecord& r : *records) max_time = std::max(max_time, r.time);
  AggregatePayload payload;
  payload.stats["max_time"] = max_time;
  payload.supporting_counts["n"] = static_cast<int64_t>(records->size());
  return payload;
}

absl::StatusOr<AggregatePayload> KmBoundariesStep(const LocalContext& context) {
  auto records = RecordsFor(context);
  if (!records.ok()) return records.status();
  int64_t width = 0;
  int64_t intervals = 0;
  try {
    width = context.broadcast.at("width").get<int64_t>();
    intervals = context.broadcast.at("intervals").get<int64_t>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
  }
  auto merged = LocalIntervalCounts(*records, width, intervals, context.policy.min_cell_count);
  if (!merged.ok()) return merged.status();
  std::vector<int64_t> boundaries = {0};
  for (const IntervalCounts& ic : *merged) boundaries.push_back(ic.t_hi);
  AggregatePayload payload;
  payload.stats["boundaries"] = boundaries;
  payload.supporting_counts["n"] = static_cast<int64_t>(records->size());
  return payload;
}

absl::StatusOr<AggregatePayload> KmCountsStep(const LocalContext& context) {
  auto records = RecordsFor(context);
  if (!records.ok()) return records.status();
  std::vector<int64_t> boundaries;
  try {
    boundaries = context.broadcast.at("boundaries").get<std::vector<int64_t>>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
  }
  if (boundaries.size() < 2 || !std::is_sorted(boundaries.begin(), boundaries.end())) {
    return absl::InvalidArgumentError("PayloadInvalid: boundaries must be increasing");
  }
  std::vector<int64_t> d, c, n;
  for (const IntervalCounts& ic : CountsOnGrid(*records, boundaries)) {
    d.push_back(ic.d);
    c.push_back(ic.c);
    n.push_back(ic.n_at_risk);
  }
  AggregatePayload payload;
  payload.counts = {{"d", d}, {"c", c}, {"n_at_risk", n}};
  return payload;
}

absl::StatusOr<KaplanMeierCurve> FederatedKaplanMeier(RoundRunner& runner,
                                                      double event_threshold, int64_t width) {
  if (width < 1) return absl::InvalidArgumentError("interval width must be >= 1 day");
  const std::vector<std::string>& columns = SurvivalColumns();
  auto horizon = runner.RunRound(OpKind::kKm, "km_max_time", columns,
                                 json{{"event_threshold", event_threshold}});
  if (!horizon.ok()) return horizon.status();
  int64_t max_time = 0;
  for (const SitePayload& site : *horizon) {
    max_time = std::max(max_time, site.payload.stats.value("max_time", int64_t{0}));
  }
  const int64_t intervals = IntervalsFor(max_time, width);

  auto proposals = runner.RunRound(
      OpKind::kKm, "km_boundaries", columns,
      json{{"event_threshold", event_threshold}, {"width", width}, {"intervals", intervals}});
  if (!proposals.ok()) return proposals.status();
  std::set<int64_t> common;
  bool first = true;
  for (const SitePayload& site : *proposals) {
    std::set<int64_t> mine;
    try {
      for (int64_t b : site.payload.stats.at("boundaries").get<std::vector<int64_t>>()) {
        mine.insert(b);
      }
    } catch (const json::exception& e) {
      return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
    }
    if (first) {
      common = std::move(mine);
      first = false;
    } else {
      std::set<int64_t> both;
      std::set_intersection(common.begin(), common.end(), mine.begin(), mine.end(),
                            std::inserter(both, both.begin()));
      common = std::move(both);
    }
  }
  std::vector<int64_t> boundaries(common.begin(), common.end());
  if (boundaries.size() < 2) {
    return absl::InvalidArgumentError("PayloadInvalid: sites share no interval grid");
  }

  auto counted = runner.RunRound(OpKind::kKm, "km_counts", columns,
                                 json{{"event_threshold", event_threshold},
                                      {"boundaries", boundaries}});
  if (!counted.ok()) return counted.status();
  std::vector<IntervalCounts> pooled;
  for (size_t j = 0; j + 1 < boundaries.size(); ++j) {
    pooled.push_back({boundaries[j], boundaries[j + 1], 0, 0, 0});
  }
  for (const SitePayload& site : *counted) {
    try {
      const auto d = site.payload.counts.at("d").get<std::vector<int64_t>>();
      const auto c = site.payload.counts.at("c").get<std::vector<int64_t>>();
      const auto n = site.payload.counts.at("n_at_risk").get<std::vector<int64_t>>();
      if (d.size() != pooled.size() || c.size() != pooled.size() || n.size() != pooled.size()) {
        return absl::InvalidArgumentError("PayloadInvalid: interval counts off the grid");
      }
      for (size_t j = 0; j < pooled.size(); ++j) {
        pooled[j].d += d[j];
        pooled[j].c += c[j];
        pooled[j].n_at_risk += n[j];
      }
    } catch (const json::exception& e) {
      return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
    }
  }
  return KaplanMeierFromCounts(pooled);
}

}  // namespace fedmed
