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

#include "tests/testing/fixtures.h"

#include <filesystem>

#include "absl/strings/str_cat.h"
#include "fedmed/cohort/schema.h"
#include "fedmed/federation.h"
#include "fedmed/synth/generator.h"
#include "fedmed/synth/random.h"

namespace fedmed::testing {

CohortTable TableFromCells(const std::vector<std::map<std::string, Cell>>& rows,
                           const std::string& site_id) {
  const Schema& schema = StandardSchema();
  std::vector<Row> out;
  for (const auto& cells : rows) {
    Row row(schema.size());
    row[*schema.IndexOf("PID")] = absl::StrCat("T-", out.size() + 1);
    for (const auto& [name, cell] : cells) row[*schema.IndexOf(name)] = cell;
    out.push_back(std::move(row));
  }
  return *CohortTable::Create(schema, std::move(out), site_id);
}

std::map<std::string, Cell> SurvivalRow(int64_t time, double edss, double cnsr,
                                        const std::map<std::string, double>& extra) {
  const Date diagnosis = *Date::Create(2022, 3, 1);
  std::map<std::string, Cell> row = {{"DIAGDT", diagnosis},
                                     {"VISITDT", Date::FromDays(diagnosis.ToDays() + time)},
                                     {"EDSS", edss},
                                     {"CNSR", cnsr}};
  for (const auto& [k, v] : extra) row[k] = v;
  return row;
}

CohortTable GeneratedTable(int64_t n, uint64_t seed, const std::string& site_id) {
  FederationGenConfig config = DefaultTwoSiteConfig();
  config.sites.resize(1);
  config.sites[0].n_subjects = n;
  config.sites[0].site_id = site_id;
  config = WithSeed(config, seed);
  return *GenerateSite(config.sites[0], config);
}

std::vector<CohortTable> Partition(const CohortTable& table, int sites, uint64_t seed) {
  Rng rng(MixSeed(seed));
  std::vector<std::vector<Row>> parts(sites);
  // The first `sites` rows seed each part so none is empty.
  for (size_t r = 0; r < table.num_rows(); ++r) {
    const size_t s = r < static_cast<size_t>(sites)
                         ? r
                         : static_cast<size_t>(rng.UniformInt(0, sites - 1));
    parts[s].push_back(table.rows()[r]);
  }
  std::vector<CohortTable> out;
  for (int s = 0; s < sites; ++s) {
    out.push_back(*CohortTable::Create(table.schema(), parts[s], absl::StrCat("part-", s + 1)));
  }
  return out;
}

CohortTable TwoRowCohort() {
  auto date = [](const char* iso) { return Cell(*Date::Parse(iso)); };
  return TableFromCells(
      {{{"PID", std::string("MS-0001")}, {"SEX", std::string("F")},
        {"ETHNIC", std::string("White")}, {"BAGE", 34.0}, {"VISITDT", date("2023-05-10")},
        {"DIAGDT", date("2023-01-15")}, {"MSSUBTP", std::string("RRMS")},
        {"TRTSDTC", date("2023-02-01")}, {"DTFSTSYM", date("2022-11-20")}, {"RELAPSE", 2.0},
        {"CDA", 0.0}, {"CNSR", 0.0}, {"VOCSTAT", std::string("Employed")},
        {"EDUSTAT", std::string("Tertiary")}, {"FOLLUPTM", 115.0},
        {"PRSNTSYM", std::string("Optic")}, {"EDSS", 2.5}, {"9HPT", 21.4}, {"T25FWT", 6.2},
        {"SDMT", 58.0}, {"MSFC", -1.75}, {"LESION_VOLUME", 812.0}, {"BASE", 2.0},
        {"CHG", 0.25}},
       {{"PID", std::string("MS-0002")}, {"SEX", std::string("M")},
        {"ETHNIC", std::string("Asian")}, {"BAGE", 51.0}, {"VISITDT", date("2023-09-02")},
        {"DIAGDT", date("2022-12-05")}, {"MSSUBTP", std::string("SPMS")},
        {"TRTSDTC", date("2023-01-09")}, {"DTFSTSYM", date("2022-08-14")}, {"RELAPSE", 5.0},
        {"CDA", 1.0}, {"CNSR", 0.0}, {"VOCSTAT", std::string("Retired")},
        {"EDUSTAT", std::string("Secondary")}, {"FOLLUPTM", 271.0},
        {"PRSNTSYM", std::string("Motor")}, {"EDSS", 5.5}, {"9HPT", 33.9}, {"T25FWT", 11.8},
        {"SDMT", 41.0}, {"MSFC", -4.1}, {"LESION_VOLUME", 5120.0}, {"BASE", 4.5},
        {"CHG", 0.8}}},
      "omop-fixture");
}

AssetPolicy OpenPolicy() {
  AssetPolicy policy = DefaultPolicy();
  policy.min_cohort_size = 1;
  policy.min_cell_count = 1;
  return policy;
}

absl::StatusOr<nlohmann::json> RunJob(const std::vector<CohortTable>& tables,
                                      const AssetPolicy& policy, const std::string& mode,
                                      const nlohmann::json& params) {
  auto fed = BuildFederation(tables, policy);
  if (!fed.ok()) return fed.status();
  auto job = fed->orchestrator->SubmitJob(fed->compute_spec_id, JobPayload{mode, params});
  if (!job.ok()) return job.status();
  if (job->status != JobStatus::kSucceeded) return job->error;
  return job->result;
}

std::string TempDir(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / ("fedmed_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace fedmed::testing
