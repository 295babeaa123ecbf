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

#ifndef FEDMED_CORE_MESSAGES_H_
#define FEDMED_CORE_MESSAGES_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fedmed/core/policy.h"
#include "json.hpp"

namespace fedmed {

// What a gateway releases for one round. `stats` holds non-count
// aggregates (sums, moments, likelihood terms); `counts` holds released
// count data such as histogram cells or event tables, every leaf of which
// is subject to the cell threshold; `supporting_counts` records how many
// rows back each statistic.
struct AggregatePayload {
  OpKind op_kind = OpKind::kTableOne;
  int round_index = 0;
  nlohmann::json stats = nlohmann::json::object();
  nlohmann::json counts = nlohmann::json::object();
  std::map<std::string, int64_t> supporting_counts;
};

struct RoundRequest {
  std::string job_id;
  int round = 0;
  std::string gateway_id;
  std::string dataset_id;
  OpKind op_kind = OpKind::kTableOne;
  std::string step;
  std::vector<std::string> columns;
  nlohmann::json broadcast = nlohmann::json::object();
};

enum class PayloadStatus { kOk, kDenied, kError };

struct RoundResponse {
  std::string job_id;
  int round = 0;
  std::string gateway_id;
  std::string dataset_id;
  OpKind op_kind = OpKind::kTableOne;
  PayloadStatus status = PayloadStatus::kOk;
  std::string reason;
  AggregatePayload payload;
};

std::string SerializeRequest(const RoundRequest& request);
absl::StatusOr<RoundRequest> ParseRequest(std::string_view bytes);

// Envelope: {job_id, round, gateway_id, op_kind, payload}, where payload is
// {dataset_id, status, reason, stats, counts, supporting_counts}.
std::string SerializeResponse(const RoundResponse& response);
absl::StatusOr<RoundResponse> ParseResponse(std::string_view bytes);

// Every numeric leaf of a JSON value, depth first.
void CollectCountLeaves(const nlohmann::json& j, std::vector<double>* out);

// Append-only JSON-lines record of all traffic. Thread-safe.
class MessageLog {
 public:
  void Append(std::string line);
  std::vector<std::string> lines() const;
  std::string Contents() const;
  absl::Status WriteTo(const std::string& path) const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> lines_;
};

}  // namespace fedmed

#endif  // FEDMED_CORE_MESSAGES_H_
