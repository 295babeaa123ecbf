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

#include "fedmed/core/gateway.h"

#include "absl/strings/str_cat.h"
#include "fedmed/core/messages.h"

namespace fedmed {

Gateway::Gateway(std::string gateway_id, const Registry* registry)
    : id_(std::move(gateway_id)), registry_(registry) {}

absl::Status Gateway::Register(const std::string& dataset_id, CohortTable table,
                               AssetPolicy policy) {
  if (absl::Status s = ValidatePolicy(policy); !s.ok()) return s;
  if (datasets_.contains(dataset_id)) {
    return absl::AlreadyExistsError(absl::StrCat("DuplicateDataset: ", dataset_id));
  }
  IdentifierScanner ids = IdentifierScanner::ForTable(table);
  datasets_.emplace(dataset_id, Dataset{std::move(table), std::move(policy), std::move(ids)});
  return absl::OkStatus();
}

bool Gateway::HasDataset(const std::string& dataset_id) const {
  return datasets_.contains(dataset_id);
}

std::vector<std::string> Gateway::dataset_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, unused] : datasets_) out.push_back(id);
  return out;
}

const AssetPolicy* Gateway::PolicyFor(const std::string& dataset_id) const {
  auto it = datasets_.find(dataset_id);
  return it == datasets_.end() ? nullptr : &it->second.policy;
}

std::string Gateway::Handle(std::string_view request_bytes) const {
  RoundResponse response;
  response.gateway_id = id_;
  auto fail = [&](PayloadStatus status, absl::string_view reason) {
    response.status = status;
    response.reason = std::string(reason);
    response.payload = AggregatePayload{};
    response.payload.op_kind = response.op_kind;
    response.payload.round_index = response.round;
    return SerializeResponse(response);
  };

  auto request = ParseRequest(request_bytes);
  if (!request.ok()) return fail(PayloadStatus::kError, request.status().message());
  response.job_id = request->job_id;
  response.round = request->round;
  response.dataset_id = request->dataset_id;
  response.op_kind = request->op_kind;

  auto it = datasets_.find(request->dataset_id);
  if (it == datasets_.end()) {
    return fail(PayloadStatus::kError, absl::StrCat("UnknownDataset: ", request->dataset_id));
  }
  const Dataset& dataset = it->second;

  if (absl::Status s = CheckRequest(dataset.policy, request->op_kind, request->columns,
                                    static_cast<int64_t>(dataset.table.num_rows()));
      !s.ok()) {
    return fail(PayloadStatus::kDenied, s.message());
  }
  const LocalStep* step = registry_->FindStep(request->step);
  if (step == nullptr) {
    return fail(PayloadStatus::kError, absl::StrCat("UnknownStep: ", request->step));
  }
  LocalContext context{dataset.table, dataset.policy, request->columns, request->broadcast};
  absl::StatusOr<AggregatePayload> payload = (*step)(context);
  if (!payload.ok()) {
    return fail(IsPolicyDenied(payload.status()) ? PayloadStatus::kDenied
                                                 : PayloadStatus::kError,
                payload.status().message());
  }
  payload->op_kind = request->op_kind;
  payload->round_index = request->round;
  if (absl::Status s = CheckOutbound(dataset.policy, *payload); !s.ok()) {
    return fail(PayloadStatus::kDenied, s.message());
  }
  response.status = PayloadStatus::kOk;
  response.payload = *std::move(payload);
  std::string bytes = SerializeResponse(response);
  if (auto leaked = dataset.identifiers.FindIn(bytes)) {
    return fail(PayloadStatus::kDenied, "PolicyDenied: payload contains an identifier value");
  }
  return bytes;
}

}  // namespace fedmed
