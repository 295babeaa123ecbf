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

#include "fedmed/surv/survival.h"

#include <optional>

#include "absl/strings/str_cat.h"
#include "fedmed/cohort/schema.h"

namespace fedmed {

const std::vector<std::string>& SurvivalColumns() {
  static const auto* const kColumns = new std::vector<std::string>{
      std::string(col::kVisitDate), std::string(col::kDiagnosisDate), std::string(col::kEdss),
      std::string(col::kCensor)};
  return *kColumns;
}

absl::StatusOr<std::vector<SurvivalRecord>> DeriveSurvival(
    const CohortTable& table, double event_threshold, const std::vector<std::string>& features) {
  std::vector<std::vector<std::optional<double>>> base;
  for (const std::string& c : SurvivalColumns()) {
    auto column = table.NumericColumn(c);
    if (!column.ok()) return column.status();
    base.push_back(*std::move(column));
  }
  std::vector<std::vector<std::optional<double>>> covariates;
  for (const std::string& c : features) {
    auto column = table.NumericColumn(c);
    if (!column.ok()) return column.status();
    covariates.push_back(*std::move(column));
  }

  std::vector<SurvivalRecord> out;
  out.reserve(table.num_rows());
  for (size_t r = 0; r < table.num_rows(); ++r) {
    const auto& visit = base[0][r];
    const auto& diagnosis = base[1][r];
    const auto& edss = base[2][r];
    const auto& censor = base[3][r];
    if (!visit || !diagnosis || !edss || !censor) continue;
    SurvivalRecord rec;
    rec.row = r;
    rec.time = static_cast<int64_t>(*visit - *diagnosis);
    if (rec.time < 0) {
      return absl::InvalidArgumentError(absl::StrCat("NegativeTime: row ", r + 1));
    }
    rec.event = *edss > event_threshold && *censor == 0.0;
    bool complete = true;
    for (const auto& column : covariates) {
      if (!column[r]) {
        complete = false;
        break;
      }
      rec.x.push_back(*column[r]);
    }
    if (complete) out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace fedmed
