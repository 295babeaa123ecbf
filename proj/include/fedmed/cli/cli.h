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

#ifndef FEDMED_CLI_CLI_H_
#define FEDMED_CLI_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"

namespace fedmed {

inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPolicy = 3;
inline constexpr int kExitNumeric = 4;
inline constexpr int kExitAudit = 5;

// 2 for InvalidArgument and NotFound, 3 for PermissionDenied, 4 for
// FailedPrecondition, 1 otherwise.
int ExitCodeFor(const absl::Status& status);

// Workflows accepted by "run --workflow", in the order "all" runs them.
const std::vector<std::string>& RunWorkflows();

// Entry point of the fedmed binary. args excludes the program name.
//   generate (--default | --config PATH) [--seed N] --out DIR
//   run --workflow W --data DIR [--policy FILE] --out DIR
//       [--event-threshold X] [--interval-width-days N] [--max-rounds N] [--pca-k N]
//   audit --run MANIFEST
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fedmed

#endif  // FEDMED_CLI_CLI_H_
