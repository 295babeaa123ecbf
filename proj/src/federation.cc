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

#include "fedmed/federation.h"

#include <cstdlib>

#include "absl/strings/str_cat.h"
#include "fedmed/pca/steps.h"
#include "fedmed/stats/steps.h"
#include "fedmed/surv/steps.h"

namespace fedmed {

const Registry& DefaultRegistry() {
  static const Registry* const kRegistry = [] {
    auto* r = new Registry();
    for (const absl::Status& s : {RegisterFedStats(*r), RegisterFedSurv(*r), RegisterFedPca(*r)}) {
      if (!s.ok()) std::abort();
    }
    return r;
  }();
  return *kRegistry;
}

absl::StatusOr<SimulatedFederation> BuildFederation(const std::vector<CohortTable>& tables,
                                                    const AssetPolicy& policy,
                                                    const Registry& registry) {
  if (absl::Status s = ValidatePolicy(policy); !s.ok()) return s;
  SimulatedFederation fed;
  fed.orchestrator = std::make_unique<Orchestrator>(&registry);
  for (const CohortTable& table : tables) {
    const std::string gateway_id = absl::StrCat("gateway-", table.site_id());
    if (fed.orchestrator->FindGateway(gateway_id) == nullptr) {
      fed.orchestrator->AddGateway(gateway_id);
    }
    auto id = fed.orchestrator->RegisterDataset(gateway_id, table, policy);
    if (!id.ok()) return id.status();
    fed.dataset_ids.push_back(*id);
  }
  auto spec = fed.orchestrator->CreateComputeSpec(fed.dataset_ids, "fedmed-analytics", "1.0");
  if (!spec.ok()) return spec.status();
  if (absl::Status s = fed.orchestrator->ActivateComputeSpec(spec->compute_spec_id); !s.ok()) {
    return s;
  }
  fed.compute_spec_id = spec->compute_spec_id;
  return fed;
}

}  // namespace fedmed
