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

#ifndef FEDMED_CORE_POLICY_H_
#define FEDMED_CORE_POLICY_H_

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fedmed/cohort/schema.h"
#include "json.hpp"

namespace fedmed {

struct AggregatePayload;

enum class OpKind { kTableOne, kCorrelation, kBinnedCount, kKm, kCox, kPcaCovariance };

std::string_view OpKindName(OpKind op);
absl::StatusOr<OpKind> ParseOpKind(std::string_view name);
const std::vector<OpKind>& AllOpKinds();

struct AssetPolicy {
  std::set<OpKind> allowed_ops;
  std::set<std::string> allowed_columns;
  int64_t min_cohort_size = 25;
  int64_t min_cell_count = 5;  // k

  friend bool operator==(const AssetPolicy&, const AssetPolicy&) = default;
};

// Every op, every non-identifier column of `schema`, n >= 25, k = 5.
AssetPolicy DefaultPolicy(const Schema& schema = StandardSchema());

// InvalidArgument unless min_cohort_size >= min_cell_count >= 1.
absl::Status ValidatePolicy(const AssetPolicy& policy);

// Policy file shape:
//   {"allowed_ops": [...], "allowed_columns": [...],
//    "min_cohort_size": 25, "min_cell_count": 5}
// Absent keys fall back to DefaultPolicy(schema).
nlohmann::json PolicyToJson(const AssetPolicy& policy);
absl::StatusOr<AssetPolicy> PolicyFromJson(const nlohmann::json& j,
                                           const Schema& schema = StandardSchema());

// PermissionDenied("PolicyDenied: <reason>") unless the op and every column
// are allowed and the local cohort has at least min_cohort_size rows.
absl::Status CheckRequest(const AssetPolicy& policy, OpKind op,
                          const std::vector<std::string>& columns, int64_t cohort_size);

// PermissionDenied unless every released count and supporting count is 0
// or at least min_cell_count.
absl::Status CheckOutbound(const AssetPolicy& policy, const AggregatePayload& payload);

bool IsPolicyDenied(const absl::Status& status);

}  // namespace fedmed

#endif  // FEDMED_CORE_POLICY_H_
