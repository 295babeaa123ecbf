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

#include "fedmed/core/policy.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "fedmed/core/messages.h"

namespace fedmed {
namespace {

using nlohmann::json;

absl::Status Denied(std::string_view reason) {
  return absl::PermissionDeniedError(absl::StrCat("PolicyDenied: ", std::string(reason)));
}

}  // namespace

std::string_view OpKindName(OpKind op) {
  switch (op) {
    case OpKind::kTableOne:
      return "tableone";
    case OpKind::kCorrelation:
      return "correlation";
    case OpKind::kBinnedCount:
      return "binned_count";
    case OpKind::kKm:
      return "km";
    case OpKind::kCox:
      return "cox";
    case OpKind::kPcaCovariance:
      return "pca_covariance";
  }
  return "unknown";
}

const std::vector<OpKind>& AllOpKinds() {
  static const auto* const kAll = new std::vector<OpKind>{
      OpKind::kTableOne, OpKind::kCorrelation, OpKind::kBinnedCount,
      OpKind::kKm,       OpKind::kCox,         OpKind::kPcaCovariance};
  return *kAll;
}

absl::StatusOr<OpKind> ParseOpKind(std::string_view name) {
  for (OpKind op : AllOpKinds()) {
    if (OpKindName(op) == name) return op;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown op kind '", std::string(name), "'"));
}

AssetPolicy DefaultPolicy(const Schema& schema) {
  AssetPolicy policy;
  policy.allowed_ops.insert(AllOpKinds().begin(), AllOpKinds().end());
  for (const ColumnSpec& c : schema.columns()) {
    if (c.kind != ColumnKind::kIdentifier) policy.allowed_columns.insert(c.name);
  }
  return policy;
}

absl::Status ValidatePolicy(const AssetPolicy& policy) {
  if (policy.min_cell_count < 1) {
    return absl::InvalidArgumentError("PolicyInvalid: min_cell_count must be >= 1");
  }
  if (policy.min_cohort_size < policy.min_cell_count) {
    return absl::InvalidArgumentError(
        "PolicyInvalid: min_cohort_size must be >= min_cell_count");
  }
  return absl::OkStatus();
}

json PolicyToJson(const AssetPolicy& policy) {
  json ops = json::array();
  for (OpKind op : policy.allowed_ops) ops.push_back(std::string(OpKindName(op)));
  return {{"allowed_ops", ops},
          {"allowed_columns", policy.allowed_columns},
          {"min_cohort_size", policy.min_cohort_size},
          {"min_cell_count", policy.min_cell_count}};
}

absl::StatusOr<AssetPolicy> PolicyFromJson(const json& j, const Schema& schema) {
  if (!j.is_object()) return absl::InvalidArgumentError("PolicyInvalid: expected an object");
  AssetPolicy policy = DefaultPolicy(schema);
  try {
    if (j.contains("allowed_ops")) {
      policy.allowed_ops.clear();
      for (const json& op : j.at("allowed_ops")) {
        auto parsed = ParseOpKind(op.get<std::string>());
        if (!parsed.ok()) {
          return absl::InvalidArgumentError(
              absl::StrCat("PolicyInvalid: ", parsed.status().message()));
        }
        policy.allowed_ops.insert(*parsed);
      }
    }
    if (j.contains("allowed_columns")) {
      policy.allowed_columns = j.at("allowed_columns").get<std::set<std::string>>();
    }
    policy.min_cohort_size = j.value("min_cohort_size", policy.min_cohort_size);
    policy.min_cell_count = j.value("min_cell_count", policy.min_cell_count);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("PolicyInvalid: ", e.what()));
  }
  if (absl::Status s = ValidatePolicy(policy); !s.ok()) return s;
  return policy;
}

absl::Status CheckRequest(const AssetPolicy& policy, OpKind op,
                          const std::vector<std::string>& columns, int64_t cohort_size) {
  if (!policy.allowed_ops.contains(op)) {
    return Denied(absl::StrCat("op-not-allowed (", std::string(OpKindName(op)), ")"));
  }
  std::vector<std::string> refused;
  for (const std::string& c : columns) {
    if (!policy.allowed_columns.contains(c)) refused.push_back(c);
  }
  if (!refused.empty()) {
    return Denied(absl::StrCat("column-not-allowed (", absl::StrJoin(refused, ", "), ")"));
  }
  if (cohort_size < policy.min_cohort_size) {
    return Denied(absl::StrCat("cohort-too-small (n=", cohort_size,
                               " < min_cohort_size=", policy.min_cohort_size, ")"));
  }
  return absl::OkStatus();
}

absl::Status CheckOutbound(const AssetPolicy& policy, const AggregatePayload& payload) {
  std::vector<double> leaves;
  CollectCountLeaves(payload.counts, &leaves);
  for (const auto& [name, n] : payload.supporting_counts) {
    leaves.push_back(static_cast<double>(n));
  }
  for (double v : leaves) {
    if (v > 0.0 && v < static_cast<double>(policy.min_cell_count)) {
      return Denied(absl::StrCat("count-below-threshold (k=", policy.min_cell_count, ")"));
    }
  }
  return absl::OkStatus();
}

bool IsPolicyDenied(const absl::Status& status) {
  return absl::IsPermissionDenied(status);
}

}  // namespace fedmed
