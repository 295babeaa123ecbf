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

#include "fedmed/core/messages.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "fedmed/cohort/csv.h"

namespace fedmed {
namespace {

using nlohmann::json;

std::string_view StatusName(PayloadStatus s) {
  switch (s) {
    case PayloadStatus::kOk:
      return "ok";
    case PayloadStatus::kDenied:
      return "denied";
    case PayloadStatus::kError:
      return "error";
  }
  return "error";
}

absl::StatusOr<json> ParseObject(std::string_view bytes) {
  json j = json::parse(bytes.begin(), bytes.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("PayloadInvalid: message is not a JSON object");
  }
  return j;
}

}  // namespace

std::string SerializeRequest(const RoundRequest& r) {
  return json{{"job_id", r.job_id},
              {"round", r.round},
              {"gateway_id", r.gateway_id},
              {"dataset_id", r.dataset_id},
              {"op_kind", std::string(OpKindName(r.op_kind))},
              {"step", r.step},
              {"columns", r.columns},
              {"broadcast", r.broadcast}}
      .dump();
}

absl::StatusOr<RoundRequest> ParseRequest(std::string_view bytes) {
  auto j = ParseObject(bytes);
  if (!j.ok()) return j.status();
  RoundRequest r;
  try {
    r.job_id = j->at("job_id").get<std::string>();
    r.round = j->at("round").get<int>();
    r.gateway_id = j->at("gateway_id").get<std::string>();
    r.dataset_id = j->at("dataset_id").get<std::string>();
    auto op = ParseOpKind(j->at("op_kind").get<std::string>());
    if (!op.ok()) return op.status();
    r.op_kind = *op;
    r.step = j->at("step").get<std::string>();
    r.columns = j->at("columns").get<std::vector<std::string>>();
    r.broadcast = j->at("broadcast");
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
  }
  return r;
}

std::string SerializeResponse(const RoundResponse& r) {
  json payload = {{"dataset_id", r.dataset_id},
                  {"status", std::string(StatusName(r.status))},
                  {"reason", r.reason},
                  {"stats", r.payload.stats},
                  {"counts", r.payload.counts},
                  {"supporting_counts", r.payload.supporting_counts}};
  return json{{"job_id", r.job_id},
              {"round", r.round},
              {"gateway_id", r.gateway_id},
              {"op_kind", std::string(OpKindName(r.op_kind))},
              {"payload", payload}}
      .dump();
}

absl::StatusOr<RoundResponse> ParseResponse(std::string_view bytes) {
  auto j = ParseObject(bytes);
  if (!j.ok()) return j.status();
  RoundResponse r;
  try {
    r.job_id = j->at("job_id").get<std::string>();
    r.round = j->at("round").get<int>();
    r.gateway_id = j->at("gateway_id").get<std::string>();
    auto op = ParseOpKind(j->at("op_kind").get<std::string>());
    if (!op.ok()) return op.status();
    r.op_kind = *op;
    const json& p = j->at("payload");
    r.dataset_id = p.at("dataset_id").get<std::string>();
    const std::string status = p.at("status").get<std::string>();
    if (status == "ok") {
      r.status = PayloadStatus::kOk;
    } else if (status == "denied") {
      r.status = PayloadStatus::kDenied;
    } else {
      r.status = PayloadStatus::kError;
    }
    r.reason = p.at("reason").get<std::string>();
    r.payload.op_kind = r.op_kind;
    r.payload.round_index = r.round;
    r.payload.stats = p.at("stats");
    r.payload.counts = p.at("counts");
    r.payload.supporting_counts =
        p.at("supporting_counts").get<std::map<std::string, int64_t>>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
  }
  return r;
}

void CollectCountLeaves(const json& j, std::vector<double>* out) {
  if (j.is_number()) {
    out->push_back(j.get<double>());
  } else if (j.is_structured()) {
    for (const json& child : j) CollectCountLeaves(child, out);
  }
}

void MessageLog::Append(std::string line) {
  std::lock_guard<std::mutex> lock(mu_);
  lines_.push_back(std::move(line));
}

std::vector<std::string> MessageLog::lines() const {
  std::lock_guard<std::mutex> lock(mu_);
  return lines_;
}

std::string MessageLog::Contents() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::string out;
  for (const std::string& l : lines_) absl::StrAppend(&out, l, "\n");
  return out;
}

absl::Status MessageLog::WriteTo(const std::string& path) const {
  return WriteFile(path, Contents());
}

}  // namespace fedmed
