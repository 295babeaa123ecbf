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

#ifndef FEDMED_SURV_KM_H_
#define FEDMED_SURV_KM_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/core/registry.h"
#include "fedmed/surv/survival.h"
#include "json.hpp"

namespace fedmed {

inline constexpr int64_t kDefaultIntervalWidthDays = 30;

// [t_lo, t_hi) in days; n_at_risk counts records with time >= t_lo.
struct IntervalCounts {
  int64_t t_lo = 0;
  int64_t t_hi = 0;
  int64_t d = 0;
  int64_t c = 0;
  int64_t n_at_risk = 0;

  friend bool operator==(const IntervalCounts&, const IntervalCounts&) = default;
};

// Number of width-w intervals needed so every time lies below the horizon.
int64_t IntervalsFor(int64_t max_time, int64_t width);

// Event and censoring counts on arbitrary boundaries b_0 < b_1 < ... < b_m.
// Records outside [b_0, b_m) are ignored.
std::vector<IntervalCounts> CountsOnGrid(const std::vector<SurvivalRecord>& records,
                                         const std::vector<int64_t>& boundaries);

// Counts on the regular grid of `intervals` cells of `width` days, with
// adjacent cells merged until every d and c is 0 or >= k. PermissionDenied
// if no merge complies.
absl::StatusOr<std::vector<IntervalCounts>> LocalIntervalCounts(
    const std::vector<SurvivalRecord>& records, int64_t width, int64_t intervals, int64_t k);

struct KmPoint {
  int64_t t_lo = 0;
  int64_t t_hi = 0;
  int64_t d = 0;
  int64_t c = 0;
  int64_t n = 0;
  double survival = 1.0;  // at t_hi
};

struct KaplanMeierCurve {
  std::vector<KmPoint> intervals;
};

// S(t_hi of interval j) = prod over i <= j of (1 - d_i / n_i).
KaplanMeierCurve KaplanMeierFromCounts(const std::vector<IntervalCounts>& counts);

// Three rounds: horizon, per-site compliant boundaries (intersected into a
// common grid), counts on the common grid.
absl::StatusOr<KaplanMeierCurve> FederatedKaplanMeier(
    RoundRunner& runner, double event_threshold = kDefaultEventThreshold,
    int64_t width = kDefaultIntervalWidthDays);

// {intervals: [{t_lo, t_hi, d, n, S}]}, plus c per interval.
nlohmann::json KmToJson(const KaplanMeierCurve& curve);

// Local steps "km_max_time", "km_boundaries", "km_counts".
absl::StatusOr<AggregatePayload> KmMaxTimeStep(const LocalContext& context);
absl::StatusOr<AggregatePayload> KmBoundariesStep(const LocalContext& context);
absl::StatusOr<AggregatePayload> KmCountsStep(const LocalContext& context);

}  // namespace fedmed

#endif  // FEDMED_SURV_KM_H_
