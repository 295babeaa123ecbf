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

#include "fedmed/cohort/schema.h"

#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace fedmed {

std::string_view ColumnKindName(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kNumeric:
      return "numeric";
    case ColumnKind::kCategorical:
      return "categorical";
    case ColumnKind::kDate:
      return "date";
    case ColumnKind::kIdentifier:
      return "identifier";
  }
  return "unknown";
}

absl::StatusOr<Schema> Schema::Create(std::vector<ColumnSpec> columns) {
  Schema schema;
  for (size_t i = 0; i < columns.size(); ++i) {
    const ColumnSpec& c = columns[i];
    if (c.name.empty()) {
      return absl::InvalidArgumentError(absl::StrCat("column ", i, " has no name"));
    }
    const bool categorical = c.kind == ColumnKind::kCategorical;
    if (categorical == c.categories.empty()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "column ", c.name,
          categorical ? " is categorical but declares no categories"
                      : " declares categories but is not categorical"));
    }
    if (!schema.index_.emplace(c.name, i).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate column name ", c.name));
    }
  }
  schema.columns_ = std::move(columns);
  return schema;
}

std::optional<size_t> Schema::IndexOf(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

absl::StatusOr<size_t> Schema::Require(std::string_view name) const {
  if (auto i = IndexOf(name)) return *i;
  return absl::NotFoundError(absl::StrCat("MissingColumn: ", std::string(name)));
}

const Schema& StandardSchema() {
  static const Schema* const kSchema = [] {
    auto num = [](std::string_view name, std::string unit) {
      return ColumnSpec{std::string(name), ColumnKind::kNumeric, std::move(unit), {}};
    };
    auto date = [](std::string_view name) {
      return ColumnSpec{std::string(name), ColumnKind::kDate, "date", {}};
    };
    auto cat = [](std::string_view name, std::vector<std::string> cats) {
      return ColumnSpec{std::string(name), ColumnKind::kCategorical, "", std::move(cats)};
    };
    std::vector<ColumnSpec> columns = {
        {std::string(col::kPid), ColumnKind::kIdentifier, "", {}},
        cat(col::kSex, {"F", "M"}),
        cat(col::kEthnic, {"Asian", "Black", "Hispanic", "Other", "White"}),
        num(col::kBaselineAge, "years"),
        date(col::kVisitDate),
        date(col::kDiagnosisDate),
        cat(col::kMsSubtype, {"PPMS", "RRMS", "SPMS"}),
        date(col::kTreatmentStart),
        date(col::kFirstSymptomDate),
        num(col::kRelapse, "count"),
        num(col::kCda, "indicator"),
        num(col::kCensor, "indicator"),
        cat(col::kVocation, {"Employed", "Retired", "Student", "Unemployed"}),
        cat(col::kEducation, {"Primary", "Secondary", "Tertiary"}),
        num(col::kFollowUp, "days"),
        cat(col::kPresentingSymptom,
            {"Brainstem", "Cerebellar", "Motor", "Optic", "Sensory"}),
        num(col::kEdss, "score"),
        num(col::kNineHolePeg, "seconds"),
        num(col::kTimedWalk, "seconds"),
        num(col::kSdmt, "score"),
        num(col::kMsfc, "z-score"),
        num(col::kLesionVolume, "mm3"),
        num(col::kBase, "score"),
        num(col::kChange, "per year"),
    };
    auto schema = Schema::Create(std::move(columns));
    return new Schema(*std::move(schema));
  }();
  return *kSchema;
}

const std::vector<std::string>& TableOneNumericColumns() {
  static const auto* const kColumns = new std::vector<std::string>{
      "SDMT", "CHG", "EDSS", "RELAPSE", "CNSR",
      "MSFC", "T25FWT", "9HPT", "LESION_VOLUME", "CDA"};
  return *kColumns;
}

const std::vector<std::string>& TableOneDateColumns() {
  static const auto* const kColumns =
      new std::vector<std::string>{"DTFSTSYM", "DIAGDT", "VISITDT", "TRTSDTC"};
  return *kColumns;
}

const std::vector<std::string>& DefaultCategoricalColumns() {
  static const auto* const kColumns = new std::vector<std::string>{
      "SEX", "ETHNIC", "MSSUBTP", "VOCSTAT", "EDUSTAT", "PRSNTSYM"};
  return *kColumns;
}

}  // namespace fedmed
