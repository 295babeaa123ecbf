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

#ifndef FEDMED_CORE_ORCHESTRATOR_H_
#define FEDMED_CORE_ORCHESTRATOR_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fedmed/cohort/table.h"
#include "fedmed/core/gateway.h"
#include "fedmed/core/messages.h"
#include "fedmed/core/policy.h"
#include "fedmed/core/registry.h"
#include "json.hpp"

namespace fedmed {

// Recorded, not enforced.
struct ResourceHints {
  int64_t client_memory = 32000;
  int64_t client_n_cpu = 14;
  int64_t client_n_gpu = 1;
  int64_t server_memory = 16000;
  int64_t server_n_cpu = 7;
};

struct ComputeSpec {
  std::string compute_spec_id;
  std::vector<std::string> dataset_ids;
  std::string model_id;
  std::string model_version;
  ResourceHints resources;
  bool active = false;
};

// Mirrors the job payload of a submission: {"mode": ..., <params>...}.
struct JobPayload {
  std::string mode;
  nlohmann::json params = nlohmann::json::object();
};

JobPayload JobPayloadFromJson(const nlohmann::json& j);
nlohmann::json JobPayloadToJson(const JobPayload& payload);

enum class JobStatus { kPending, kRunning, kSucceeded, kFailed, kDenied };
std::string_view JobStatusName(JobStatus status);

struct Contribution {
  std::string gateway_id;
  int round = 0;
  friend bool operator==(const Contribution&, const Contribution&) = default;
};

struct Job {
  std::string job_id;
  std::string compute_spec_id;
  JobPayload payload;
  JobStatus status = JobStatus::kPending;
  std::vector<JobStatus> history;  // every status the job has held, in order
  absl::Status error;              // set for failed and denied jobs
  nlohmann::json result;           // set for succeeded jobs
  std::vector<Contribution> provenance;
};

// The central coordinator. Owns the simulated gateways; every exchange with
// them goes through serialized bytes and is appended to the message log.
class Orchestrator {
 public:
  explicit Orchestrator(const Registry* registry);

  Orchestrator(const Orchestrator&) = delete;
  Orchestrator& operator=(const Orchestrator&) = delete;

  Gateway& AddGateway(const std::string& gateway_id);
  Gateway* FindGateway(const std::string& gateway_id);

  // Registers `table` at the gateway under `dataset_id` (default: the
  // table's site id). AlreadyExists("DuplicateDataset: ...") if the id is
  // registered anywhere in the federation; NotFound for unknown gateways.
  absl::StatusOr<std::string> RegisterDataset(const std::string& gateway_id,
                                              CohortTable table, AssetPolicy policy,
                                              std::string dataset_id = "");

  // InvalidArgument for empty ids or non-positive resources,
  // NotFound("UnknownDataset: <id>") for unregistered datasets.
  absl::StatusOr<ComputeSpec> CreateComputeSpec(const std::vector<std::string>& dataset_ids,
                                                const std::string& model_id,
                                                const std::string& model_version,
                                                const ResourceHints& resources = {});
  absl::Status ActivateComputeSpec(const std::string& compute_spec_id);
  const ComputeSpec* FindComputeSpec(const std::string& compute_spec_id) const;

  // Validates the payload (InvalidArgument "PayloadInvalid: ..." before any
  // job is created), then runs it to completion. A policy refusal at any
  // gateway denies the whole job; any other failure fails it.
  absl::StatusOr<Job> SubmitJob(const std::string& compute_spec_id, const JobPayload& payload);

  // A round runner bound to an active spec, for driving protocols directly.
  absl::StatusOr<std::unique_ptr<RoundRunner>> OpenSession(const std::string& compute_spec_id);

  const MessageLog& log() const { return log_; }
  const std::vector<Job>& jobs() const { return jobs_; }

 private:
  class SpecRunner;

  const Registry* registry_;
  std::vector<std::unique_ptr<Gateway>> gateways_;
  std::map<std::string, std::string> dataset_gateway_;  // dataset id -> gateway id
  std::map<std::string, ComputeSpec> specs_;
  std::vector<Job> jobs_;
  int next_spec_ = 1;
  int next_job_ = 1;
  int next_session_ = 1;
  MessageLog log_;
};

}  // namespace fedmed

#endif  // FEDMED_CORE_ORCHESTRATOR_H_
