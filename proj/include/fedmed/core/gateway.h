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

#ifndef FEDMED_CORE_GATEWAY_H_
#define FEDMED_CORE_GATEWAY_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "fedmed/cohort/table.h"
#include "fedmed/core/audit.h"
#include "fedmed/core/policy.h"
#include "fedmed/core/registry.h"

namespace fedmed {

// A site-local worker. It holds registered tables and answers serialized
// round requests with serialized envelopes; rows never leave it.
class Gateway {
 public:
  Gateway(std::string gateway_id, const Registry* registry);

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  const std::string& id() const { return id_; }

  // AlreadyExists("DuplicateDataset: ...") if the id is taken here.
  absl::Status Register(const std::string& dataset_id, CohortTable table, AssetPolicy policy);
  bool HasDataset(const std::string& dataset_id) const;
  std::vector<std::string> dataset_ids() const;
  const AssetPolicy* PolicyFor(const std::string& dataset_id) const;

  // Runs policy checks, the requested local step and the outbound check.
  // Failures are reported inside the envelope (status "denied" or "error").
  std::string Handle(std::string_view request_bytes) const;

 private:
  struct Dataset {
    CohortTable table;
    AssetPolicy policy;
    IdentifierScanner identifiers;
  };

  std::string id_;
  const Registry* registry_;
  std::map<std::string, Dataset> datasets_;
};

}  // namespace fedmed

#endif  // FEDMED_CORE_GATEWAY_H_
