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

#ifndef FEDMED_CORE_REGISTRY_H_
#define FEDMED_CORE_REGISTRY_H_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fedmed/cohort/table.h"
#include "fedmed/core/messages.h"
#include "fedmed/core/policy.h"
#include "json.hpp"

namespace fedmed {

// Everything a local step may see. It runs gateway-side only.
struct LocalContext {
  const CohortTable& table;
  const AssetPolicy& policy;
  const std::vector<std::string>& columns;
  const nlohmann::json& broadcast;
};

using LocalStep = std::function<absl::StatusOr<AggregatePayload>(const LocalContext&)>;

// One gateway's contribution to a round.
struct SitePayload {
  std::string gateway_id;
  std::string dataset_id;
  AggregatePayload payload;
};

// Drives synchronous rounds across every dataset of a compute spec. A round
// fails as a whole: PermissionDenied("PolicyDenied: gateway <id>: ...") if
// any gateway refuses, Unavailable("GatewayFailure: <id>: ...") if any step
// errors.
class RoundRunner {
 public:
  virtual ~RoundRunner() = default;

  virtual absl::StatusOr<std::vector<SitePayload>> RunRound(
      OpKind op, const std::string& step, const std::vector<std::string>& columns,
      const nlohmann::json& broadcast) = 0;

  virtual int rounds_run() const = 0;
};

struct Workflow {
  OpKind op_kind = OpKind::kTableOne;
  // Rejects unknown or ill-typed params with InvalidArgument("PayloadInvalid: ...").
  std::function<absl::Status(const nlohmann::json& params)> validate;
  std::function<absl::StatusOr<nlohmann::json>(RoundRunner& runner,
                                               const nlohmann::json& params)>
      run;
};

class Registry {
 public:
  absl::Status AddStep(std::string name, LocalStep step);
  absl::Status AddWorkflow(std::string mode, Workflow workflow);

  const LocalStep* FindStep(const std::string& name) const;
  const Workflow* FindWorkflow(const std::string& mode) const;
  std::vector<std::string> modes() const;

 private:
  std::map<std::string, LocalStep> steps_;
  std::map<std::string, Workflow> workflows_;
};

// Helpers for workflow param validation.
absl::Status RequireKnownKeys(const nlohmann::json& params,
                              const std::vector<std::string>& known);
absl::Status RequireStringList(const nlohmann::json& params, const std::string& key);
absl::Status RequirePositiveInt(const nlohmann::json& params, const std::string& key);
absl::Status RequireNumber(const nlohmann::json& params, const std::string& key);
absl::Status RequireBool(const nlohmann::json& params, const std::string& key);

}  // namespace fedmed

#endif  // FEDMED_CORE_REGISTRY_H_
