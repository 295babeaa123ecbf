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

#include "fedmed/cohort/omop.h"

#include <filesystem>
#include <map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "fedmed/cohort/csv.h"

namespace fedmed {
namespace {

std::string CellText(const Cell& cell) {
  if (const double* v = std::get_if<double>(&cell)) return FormatNumber(*v);
  if (const std::string* s = std::get_if<std::string>(&cell)) return *s;
  if (const Date* d = std::get_if<Date>(&cell)) return d->ToString();
  return "";
}

}  // namespace

std::string_view OmopTableName(OmopTable table) {
  switch (table) {
    case OmopTable::kPerson:
      return "PERSON";
    case OmopTable::kVisitOccurrence:
      return "VISIT_OCCURRENCE";
    case OmopTable::kConditionOccurrence:
      return "CONDITION_OCCURRENCE";
    case OmopTable::kDrugExposure:
      return "DRUG_EXPOSURE";
    case OmopTable::kObservationPeriod:
      return "OBSERVATION_PERIOD";
    case OmopTable::kObservation:
      return "OBSERVATION";
    case OmopTable::kMeasurement:
      return "MEASUREMENT";
  }
  return "UNKNOWN";
}

const std::vector<std::pair<std::string, OmopTable>>& OmopVariableMapping() {
  using T = OmopTable;
  static const auto* const kMapping = new std::vector<std::pair<std::string, OmopTable>>{
      {"PID", T::kPerson},
      {"SEX", T::kPerson},
      {"ETHNIC", T::kPerson},
      {"BAGE", T::kPerson},
      {"VISITDT", T::kVisitOccurrence},
      {"DIAGDT", T::kConditionOccurrence},
      {"MSSUBTP", T::kConditionOccurrence},
      {"TRTSDTC", T::kDrugExposure},
      {"DTFSTSYM", T::kObservationPeriod},
      {"RELAPSE", T::kObservation},
      {"CDA", T::kObservation},
      {"CNSR", T::kObservation},
      {"VOCSTAT", T::kObservation},
      {"EDUSTAT", T::kObservation},
      {"FOLLUPTM", T::kObservation},
      {"PRSNTSYM", T::kObservation},
      {"EDSS", T::kMeasurement},
      {"9HPT", T::kMeasurement},
      {"T25FWT", T::kMeasurement},
      {"SDMT", T::kMeasurement},
      {"MSFC", T::kMeasurement},
      {"LESION_VOLUME", T::kMeasurement},
      {"BASE", T::kMeasurement},
      {"CHG", T::kMeasurement},
  };
  return *kMapping;
}

absl::StatusOr<std::vector<OmopRowSet>> ExportOmop(const CohortTable& table) {
  const Schema& schema = table.schema();
  std::map<std::string, size_t> idx;
  for (const auto& [name, unused] : OmopVariableMapping()) {
    auto i = schema.Require(name);
    if (!i.ok()) return i.status();
    idx[name] = *i;
  }

  std::vector<OmopRowSet> sets(kNumOmopTables);
  auto& person = sets[0];
  auto& visit = sets[1];
  auto& condition = sets[2];
  auto& drug = sets[3];
  auto& period = sets[4];
  auto& observation = sets[5];
  auto& measurement = sets[6];
  for (int t = 0; t < kNumOmopTables; ++t) sets[t].table = static_cast<OmopTable>(t);

  person.columns = {"person_id",          "gender_concept_id",     "gender_source_value",
                    "ethnicity_concept_id", "ethnicity_source_value", "baseline_age"};
  visit.columns = {"visit_occurrence_id", "person_id", "visit_concept_id",
                   "visit_start_date", "visit_source_value"};
  condition.columns = {"condition_occurrence_id", "person_id", "condition_concept_id",
                       "condition_start_date", "condition_source_value"};
  drug.columns = {"drug_exposure_id", "person_id", "drug_concept_id",
                  "drug_exposure_start_date", "drug_source_value"};
  period.columns = {"observation_period_id", "person_id",
                    "observation_period_start_date", "observation_period_end_date",
                    "period_type_concept_id"};
  observation.columns = {"observation_id",       "person_id",
                         "observation_concept_id", "observation_date",
                         "observation_source_value", "value_as_number",
                         "value_as_string"};
  measurement.columns = {"measurement_id",          "person_id",
                         "measurement_concept_id",  "measurement_date",
                         "measurement_source_value", "value_as_number"};

  size_t observation_id = 0;
  size_t measurement_id = 0;
  for (size_t r = 0; r < table.num_rows(); ++r) {
    const Row& row = table.rows()[r];
    auto text = [&](const char* name) { return CellText(row[idx.at(name)]); };
    const std::string pid = text("PID");
    const std::string seq = absl::StrCat(r + 1);
    const std::string visit_date = text("VISITDT");

    person.rows.push_back({pid, "0", text("SEX"), "0", text("ETHNIC"), text("BAGE")});
    visit.rows.push_back({seq, pid, "0", visit_date, "VISITDT"});
    condition.rows.push_back({seq, pid, "0", text("DIAGDT"), text("MSSUBTP")});
    drug.rows.push_back({seq, pid, "0", text("TRTSDTC"), "TRTSDTC"});
    period.rows.push_back({seq, pid, text("DTFSTSYM"), visit_date, "0"});

    for (const auto& [name, dest] : OmopVariableMapping()) {
      const Cell& cell = row[idx.at(name)];
      if (IsMissing(cell)) continue;
      if (dest == OmopTable::kObservation) {
        const bool numeric = std::holds_alternative<double>(cell);
        observation.rows.push_back({absl::StrCat(++observation_id), pid, "0",
                                    visit_date, name,
                                    numeric ? CellText(cell) : "",
                                    numeric ? "" : CellText(cell)});
      } else if (dest == OmopTable::kMeasurement) {
        measurement.rows.push_back({absl::StrCat(++measurement_id), pid, "0",
                                    visit_date, name, CellText(cell)});
      }
    }
  }
  return sets;
}

std::string OmopRowSetCsv(const OmopRowSet& rows) {
  std::string out = absl::StrJoin(rows.columns, ",");
  out.push_back('\n');
  for (const auto& row : rows.rows) {
    std::vector<std::string> escaped;
    escaped.reserve(row.size());
    for (const auto& f : row) escaped.push_back(CsvEscape(f));
    absl::StrAppend(&out, absl::StrJoin(escaped, ","), "\n");
  }
  return out;
}

absl::Status WriteOmop(const std::vector<OmopRowSet>& sets, const std::string& dir) {
  for (const OmopRowSet& s : sets) {
    const std::filesystem::path path =
        std::filesystem::path(dir) / (std::string(OmopTableName(s.table)) + ".csv");
    if (absl::Status st = WriteFile(path.string(), OmopRowSetCsv(s)); !st.ok()) {
      return st;
    }
  }
  return absl::OkStatus();
}

}  // namespace fedmed
