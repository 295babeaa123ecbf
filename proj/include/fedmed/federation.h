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

#ifndef FEDMED_FEDERATION_H_
#define FEDMED_FEDERATION_H_

#include <memory>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/cohort/table.h"
#include "fedmed/core/orchestrator.h"
#include "fedmed/core/policy.h"
#include "fedmed/core/registry.h"

namespace fedmed {

// Every step and workflow of the stats, survival and PCA modules.
const Registry& DefaultRegistry();

// One gateway per table ("gateway-<site id>"), each table registered under
// its site id with `policy`, bound by one active compute spec.
struct SimulatedFederation {
  std::unique_ptr<Orchestrator> orchestrator;
  std::string compute_spec_id;
  std::vector<std::string> dataset_ids;
};

absl::StatusOr<SimulatedFederation> BuildFederation(const std::vector<CohortTable>& tables,
                                                    const AssetPolicy& policy,
                                                    const Registry& registry = DefaultRegistry());

}  // namespace fedmed

#endif  // FEDMED_FEDERATION_H_
