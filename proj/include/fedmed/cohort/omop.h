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

#ifndef FEDMED_COHORT_OMOP_H_
#define FEDMED_COHORT_OMOP_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fedmed/cohort/table.h"

namespace fedmed {

enum class OmopTable {
  kPerson,
  kVisitOccurrence,
  kConditionOccurrence,
  kDrugExposure,
  kObservationPeriod,
  kObservation,
  kMeasurement,
};

inline constexpr int kNumOmopTables = 7;

std::string_view OmopTableName(OmopTable table);

// Structural OMOP rows. Concept ids are always 0; source variable names and
// values travel in *_source_value / value_as_* fields.
struct OmopRowSet {
  OmopTable table;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// Source variable -> destination OMOP table, one entry per mapped variable.
const std::vector<std::pair<std::string, OmopTable>>& OmopVariableMapping();

// Emits all seven row sets in OmopTable order. Requires the standard
// dictionary's columns to be present.
absl::StatusOr<std::vector<OmopRowSet>> ExportOmop(const CohortTable& table);

std::string OmopRowSetCsv(const OmopRowSet& rows);
// Writes <TABLE_NAME>.csv per row set into an existing directory.
absl::Status WriteOmop(const std::vector<OmopRowSet>& sets, const std::string& dir);

}  // namespace fedmed

#endif  // FEDMED_COHORT_OMOP_H_
