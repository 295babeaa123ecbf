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

#include "fedmed/core/registry.h"

#include <algorithm>

#include "absl/strings/str_cat.h"

namespace fedmed {
namespace {

using nlohmann::json;

absl::Status Invalid(const std::string& key, std::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("PayloadInvalid: '", key, "' ", std::string(what)));
}

}  // namespace

absl::Status Registry::AddStep(std::string name, LocalStep step) {
  if (!steps_.emplace(name, std::move(step)).second) {
    return absl::AlreadyExistsError(absl::StrCat("step '", name, "' already registered"));
  }
  return absl::OkStatus();
}

absl::Status Registry::AddWorkflow(std::string mode, Workflow workflow) {
  if (!workflows_.emplace(mode, std::move(workflow)).second) {
    return absl::AlreadyExistsError(absl::StrCat("workflow '", mode, "' already registered"));
  }
  return absl::OkStatus();
}

const LocalStep* Registry::FindStep(const std::string& name) const {
  auto it = steps_.find(name);
  return it == steps_.end() ? nullptr : &it->second;
}

const Workflow* Registry::FindWorkflow(const std::string& mode) const {
  auto it = workflows_.find(mode);
  return it == workflows_.end() ? nullptr : &it->second;
}

std::vector<std::string> Registry::modes() const {
  std::vector<std::string> out;
  for (const auto& [mode, unused] : workflows_) out.push_back(mode);
  return out;
}

absl::Status RequireKnownKeys(const json& params, const std::vector<std::string>& known) {
  if (!params.is_object()) {
    return absl::InvalidArgumentError("PayloadInvalid: params must be an object");
  }
  for (const auto& [key, unused] : params.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      return Invalid(key, "is not a parameter of this mode");
    }
  }
  return absl::OkStatus();
}

absl::Status RequireStringList(const json& params, const std::string& key) {
  if (!params.contains(key)) return absl::OkStatus();
  const json& v = params.at(key);
  if (!v.is_array() || v.empty()) return Invalid(key, "must be a non-empty list");
  for (const json& e : v) {
    if (!e.is_string()) return Invalid(key, "must contain strings");
  }
  return absl::OkStatus();
}

absl::Status RequirePositiveInt(const json& params, const std::string& key) {
  if (!params.contains(key)) return absl::OkStatus();
  const json& v = params.at(key);
  if (!v.is_number_integer() || v.get<int64_t>() < 1) {
    return Invalid(key, "must be a positive integer");
  }
  return absl::OkStatus();
}

absl::Status RequireNumber(const json& params, const std::string& key) {
  if (!params.contains(key)) return absl::OkStatus();
  if (!params.at(key).is_number()) return Invalid(key, "must be a number");
  return absl::OkStatus();
}

absl::Status RequireBool(const json& params, const std::string& key) {
  if (!params.contains(key)) return absl::OkStatus();
  if (!params.at(key).is_boolean()) return Invalid(key, "must be a boolean");
  return absl::OkStatus();
}

}  // namespace fedmed
