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

#include "fedmed/core/orchestrator.h"

#include <future>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace fedmed {

using nlohmann::json;

JobPayload JobPayloadFromJson(const json& j) {
  JobPayload payload;
  if (!j.is_object()) return payload;
  payload.mode = j.value("mode", "");
  for (const auto& [key, value] : j.items()) {
    if (key != "mode") payload.params[key] = value;
  }
  return payload;
}

json JobPayloadToJson(const JobPayload& payload) {
  json j = payload.params.is_object() ? payload.params : json::object();
  j["mode"] = payload.mode;
  return j;
}

std::string_view JobStatusName(JobStatus status) {
  switch (status) {
    case JobStatus::kPending:
      return "pending";
    case JobStatus::kRunning:
      return "running";
    case JobStatus::kSucceeded:
      return "succeeded";
    case JobStatus::kFailed:
      return "failed";
    case JobStatus::kDenied:
      return "denied";
  }
  return "unknown";
}

class Orchestrator::SpecRunner : public RoundRunner {
 public:
  SpecRunner(Orchestrator* owner, ComputeSpec spec, std::string job_id,
             std::vector<Contribution>* provenance)
      : owner_(owner),
        spec_(std::move(spec)),
        job_id_(std::move(job_id)),
        provenance_(provenance) {}

  absl::StatusOr<std::vector<SitePayload>> RunRound(OpKind op, const std::string& step,
                                                    const std::vector<std::string>& columns,
                                                    const json& broadcast) override {
    const int round = ++rounds_;
    std::vector<const Gateway*> gateways;
    std::vector<std::string> requests;
    for (const std::string& dataset_id : spec_.dataset_ids) {
      const Gateway* gateway = owner_->FindGateway(owner_->dataset_gateway_.at(dataset_id));
      RoundRequest request{job_id_, round, gateway->id(), dataset_id, op, step, columns,
                           broadcast};
      requests.push_back(SerializeRequest(request));
      owner_->log_.Append(requests.back());
      gateways.push_back(gateway);
    }

    std::vector<std::future<std::string>> pending;
    for (size_t i = 0; i < gateways.size(); ++i) {
      pending.push_back(std::async(std::launch::async, [g = gateways[i], &bytes = requests[i]] {
        return g->Handle(bytes);
      }));
    }
    std::vector<RoundResponse> responses;
    absl::Status transport = absl::OkStatus();
    for (size_t i = 0; i < pending.size(); ++i) {
      std::string bytes = pending[i].get();
      owner_->log_.Append(bytes);
      auto response = ParseResponse(bytes);
      if (!response.ok()) {
        if (transport.ok()) {
          transport = absl::UnavailableError(absl::StrCat(
              "GatewayFailure: ", gateways[i]->id(), ": ", response.status().message()));
        }
        continue;
      }
      responses.push_back(*std::move(response));
    }

    for (const RoundResponse& r : responses) {
      if (r.status == PayloadStatus::kDenied) {
        return absl::PermissionDeniedError(
            absl::StrCat("PolicyDenied: gateway ", r.gateway_id, ": ", r.reason));
      }
    }
    if (!transport.ok()) return transport;
    for (const RoundResponse& r : responses) {
      if (r.status == PayloadStatus::kError) {
        return absl::UnavailableError(
            absl::StrCat("GatewayFailure: ", r.gateway_id, ": ", r.reason));
      }
    }

    std::vector<SitePayload> out;
    for (RoundResponse& r : responses) {
      if (provenance_ != nullptr) provenance_->push_back({r.gateway_id, round});
      out.push_back({r.gateway_id, r.dataset_id, std::move(r.payload)});
    }
    return out;
  }

  int rounds_run() const override { return rounds_; }

 private:
  Orchestrator* owner_;
  ComputeSpec spec_;
  std::string job_id_;
  std::vector<Contribution>* provenance_;
  int rounds_ = 0;
};

Orchestrator::Orchestrator(const Registry* registry) : registry_(registry) {}

Gateway& Orchestrator::AddGateway(const std::string& gateway_id) {
  if (Gateway* existing = FindGateway(gateway_id)) return *existing;
  gateways_.push_back(std::make_unique<Gateway>(gateway_id, registry_));
  return *gateways_.back();
}

Gateway* Orchestrator::FindGateway(const std::string& gateway_id) {
  for (auto& g : gateways_) {
    if (g->id() == gateway_id) return g.get();
  }
  return nullptr;
}

absl::StatusOr<std::string> Orchestrator::RegisterDataset(const std::string& gateway_id,
                                                          CohortTable table,
                                                          AssetPolicy policy,
                                                          std::string dataset_id) {
  Gateway* gateway = FindGateway(gateway_id);
  if (gateway == nullptr) {
    return absl::NotFoundError(absl::StrCat("UnknownGateway: ", gateway_id));
  }
  if (dataset_id.empty()) dataset_id = table.site_id();
  if (dataset_id.empty()) return absl::InvalidArgumentError("dataset id must be non-empty");
  if (dataset_gateway_.contains(dataset_id)) {
    return absl::AlreadyExistsError(absl::StrCat("DuplicateDataset: ", dataset_id));
  }
  const int64_t k = policy.min_cell_count;
  if (absl::Status s = gateway->Register(dataset_id, std::move(table), std::move(policy));
      !s.ok()) {
    return s;
  }
  dataset_gateway_[dataset_id] = gateway_id;
  log_.Append(json{{"type", "registration"},
                   {"gateway_id", gateway_id},
                   {"dataset_id", dataset_id},
                   {"min_cell_count", k}}
                  .dump());
  return dataset_id;
}

absl::StatusOr<ComputeSpec> Orchestrator::CreateComputeSpec(
    const std::vector<std::string>& dataset_ids, const std::string& model_id,
    const std::string& model_version, const ResourceHints& resources) {
  if (dataset_ids.empty()) {
    return absl::InvalidArgumentError("ComputeSpecInvalid: dataset_ids must be non-empty");
  }
  if (resources.client_memory <= 0 || resources.client_n_cpu <= 0 ||
      resources.client_n_gpu <= 0 || resources.server_memory <= 0 ||
      resources.server_n_cpu <= 0) {
    return absl::InvalidArgumentError("ComputeSpecInvalid: resources must be positive");
  }
  std::set<std::string> seen;
  for (const std::string& id : dataset_ids) {
    if (!dataset_gateway_.contains(id)) {
      return absl::NotFoundError(absl::StrCat("UnknownDataset: ", id));
    }
    if (!seen.insert(id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("ComputeSpecInvalid: dataset '", id, "' listed twice"));
    }
  }
  ComputeSpec spec;
  spec.compute_spec_id = absl::StrFormat("cs-%04d", next_spec_++);
  spec.dataset_ids = dataset_ids;
  spec.model_id = model_id;
  spec.model_version = model_version;
  spec.resources = resources;
  specs_[spec.compute_spec_id] = spec;
  return spec;
}

absl::Status Orchestrator::ActivateComputeSpec(const std::string& compute_spec_id) {
  auto it = specs_.find(compute_spec_id);
  if (it == specs_.end()) {
    return absl::NotFoundError(absl::StrCat("UnknownComputeSpec: ", compute_spec_id));
  }
  it->second.active = true;
  return absl::OkStatus();
}

const ComputeSpec* Orchestrator::FindComputeSpec(const std::string& compute_spec_id) const {
  auto it = specs_.find(compute_spec_id);
  return it == specs_.end() ? nullptr : &it->second;
}

absl::StatusOr<Job> Orchestrator::SubmitJob(const std::string& compute_spec_id,
                                            const JobPayload& payload) {
  const ComputeSpec* spec = FindComputeSpec(compute_spec_id);
  if (spec == nullptr) {
    return absl::NotFoundError(absl::StrCat("UnknownComputeSpec: ", compute_spec_id));
  }
  if (!spec->active) {
    return absl::FailedPreconditionError(
        absl::StrCat("ComputeSpecInactive: ", compute_spec_id));
  }
  const Workflow* workflow = registry_->FindWorkflow(payload.mode);
  if (workflow == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("PayloadInvalid: unknown mode '", payload.mode, "'"));
  }
  if (absl::Status s = workflow->validate(payload.params); !s.ok()) return s;

  Job job;
  job.job_id = absl::StrFormat("job-%04d", next_job_++);
  job.compute_spec_id = compute_spec_id;
  job.payload = payload;
  job.history.push_back(JobStatus::kPending);

  job.status = JobStatus::kRunning;
  job.history.push_back(JobStatus::kRunning);
  SpecRunner runner(this, *spec, job.job_id, &job.provenance);
  absl::StatusOr<json> result = workflow->run(runner, payload.params);
  if (result.ok()) {
    job.status = JobStatus::kSucceeded;
    job.result = *std::move(result);
  } else {
    job.status = IsPolicyDenied(result.status()) ? JobStatus::kDenied : JobStatus::kFailed;
    job.error = result.status();
    job.provenance.clear();
  }
  job.history.push_back(job.status);
  jobs_.push_back(job);
  return job;
}

absl::StatusOr<std::unique_ptr<RoundRunner>> Orchestrator::OpenSession(
    const std::string& compute_spec_id) {
  const ComputeSpec* spec = FindComputeSpec(compute_spec_id);
  if (spec == nullptr) {
    return absl::NotFoundError(absl::StrCat("UnknownComputeSpec: ", compute_spec_id));
  }
  if (!spec->active) {
    return absl::FailedPreconditionError(
        absl::StrCat("ComputeSpecInactive: ", compute_spec_id));
  }
  return std::unique_ptr<RoundRunner>(std::make_unique<SpecRunner>(
      this, *spec, absl::StrFormat("session-%04d", next_session_++), nullptr));
}

}  // namespace fedmed
