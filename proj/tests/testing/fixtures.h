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

#ifndef FEDMED_TESTS_TESTING_FIXTURES_H_
#define FEDMED_TESTS_TESTING_FIXTURES_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/cohort/table.h"
#include "fedmed/core/policy.h"
#include "json.hpp"

namespace fedmed::testing {

// Standard-schema table; PID defaults to T-<row>, other unspecified cells
// are missing.
CohortTable TableFromCells(const std::vector<std::map<std::string, Cell>>& rows,
                           const std::string& site_id = "site-t");

// Survival-ready rows: DIAGDT fixed, VISITDT = DIAGDT + time.
std::map<std::string, Cell> SurvivalRow(int64_t time, double edss, double cnsr,
                                        const std::map<std::string, double>& extra = {});

// A generated single-site table of n rows.
CohortTable GeneratedTable(int64_t n, uint64_t seed, const std::string& site_id = "pool");

// Rows assigned to `sites` non-empty parts uniformly at random.
std::vector<CohortTable> Partition(const CohortTable& table, int sites, uint64_t seed);

// Two fully populated subjects, the OMOP export fixture.
CohortTable TwoRowCohort();

// Every op and column allowed, k = 1, min cohort 1.
AssetPolicy OpenPolicy();

// Builds a federation over the tables and runs one job.
absl::StatusOr<nlohmann::json> RunJob(const std::vector<CohortTable>& tables,
                                      const AssetPolicy& policy, const std::string& mode,
                                      const nlohmann::json& params = nlohmann::json::object());

// Fresh empty directory under the system temp dir.
std::string TempDir(const std::string& name);

}  // namespace fedmed::testing

#endif  // FEDMED_TESTS_TESTING_FIXTURES_H_
