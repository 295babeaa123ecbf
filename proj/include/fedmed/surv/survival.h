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

#ifndef FEDMED_SURV_SURVIVAL_H_
#define FEDMED_SURV_SURVIVAL_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/cohort/table.h"

namespace fedmed {

inline constexpr double kDefaultEventThreshold = 2.0;

struct SurvivalRecord {
  size_t row = 0;    // source row in the site table
  int64_t time = 0;  // days from DIAGDT to VISITDT
  bool event = false;
  std::vector<double> x;

  friend bool operator==(const SurvivalRecord&, const SurvivalRecord&) = default;
};

// Columns every survival computation reads.
const std::vector<std::string>& SurvivalColumns();

// event = EDSS > threshold and CNSR == 0. Rows missing any of the survival
// columns or features are skipped.
// Errors: MissingColumn, NonNumericColumn, InvalidArgument("NegativeTime: row R").
absl::StatusOr<std::vector<SurvivalRecord>> DeriveSurvival(
    const CohortTable& table, double event_threshold = kDefaultEventThreshold,
    const std::vector<std::string>& features = {});

}  // namespace fedmed

#endif  // FEDMED_SURV_SURVIVAL_H_
