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

#ifndef FEDMED_STATS_STEPS_H_
#define FEDMED_STATS_STEPS_H_

#include <vector>

#include "absl/status/status.h"
#include "fedmed/core/registry.h"
#include "fedmed/stats/correlation.h"
#include "fedmed/stats/tableone.h"
#include "json.hpp"

namespace fedmed {

// Local steps: moments, histogram, five_number, crossproducts, binned_count.
// Workflows (job modes):
//   tableone       {numeric_columns, date_columns, bins}
//   boxplot        {columns, per_site, bins}
//   correlation    {columns}
//   binned_scatter {x, y, x_bins, y_bins}
absl::Status RegisterFedStats(Registry& registry);

nlohmann::json TableOneToJson(const std::vector<TableOneRow>& rows);
nlohmann::json CorrelationToJson(const CorrelationResult& result);

}  // namespace fedmed

#endif  // FEDMED_STATS_STEPS_H_
