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

#ifndef FEDMED_COHORT_SCHEMA_H_
#define FEDMED_COHORT_SCHEMA_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace fedmed {

enum class ColumnKind { kNumeric, kCategorical, kDate, kIdentifier };

std::string_view ColumnKindName(ColumnKind kind);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  std::string unit;
  // Ordered category labels; non-empty iff kind == kCategorical.
  std::vector<std::string> categories;

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

// An ordered list of uniquely named columns.
class Schema {
 public:
  Schema() = default;

  static absl::StatusOr<Schema> Create(std::vector<ColumnSpec> columns);

  const std::vector<ColumnSpec>& columns() const { return columns_; }
  size_t size() const { return columns_.size(); }
  const ColumnSpec& column(size_t i) const { return columns_[i]; }

  std::optional<size_t> IndexOf(std::string_view name) const;
  // NotFound("MissingColumn: <name>") when absent.
  absl::StatusOr<size_t> Require(std::string_view name) const;

  friend bool operator==(const Schema& a, const Schema& b) {
    return a.columns_ == b.columns_;
  }

 private:
  std::vector<ColumnSpec> columns_;
  std::map<std::string, size_t, std::less<>> index_;
};

// Variable names of the clinical data dictionary.
namespace col {
inline constexpr std::string_view kPid = "PID";
inline constexpr std::string_view kSex = "SEX";
inline constexpr std::string_view kEthnic = "ETHNIC";
inline constexpr std::string_view kBaselineAge = "BAGE";
inline constexpr std::string_view kVisitDate = "VISITDT";
inline constexpr std::string_view kDiagnosisDate = "DIAGDT";
inline constexpr std::string_view kMsSubtype = "MSSUBTP";
inline constexpr std::string_view kTreatmentStart = "TRTSDTC";
inline constexpr std::string_view kFirstSymptomDate = "DTFSTSYM";
inline constexpr std::string_view kRelapse = "RELAPSE";
inline constexpr std::string_view kCda = "CDA";
inline constexpr std::string_view kCensor = "CNSR";
inline constexpr std::string_view kVocation = "VOCSTAT";
inline constexpr std::string_view kEducation = "EDUSTAT";
inline constexpr std::string_view kFollowUp = "FOLLUPTM";
inline constexpr std::string_view kPresentingSymptom = "PRSNTSYM";
inline constexpr std::string_view kEdss = "EDSS";
inline constexpr std::string_view kNineHolePeg = "9HPT";
inline constexpr std::string_view kTimedWalk = "T25FWT";
inline constexpr std::string_view kSdmt = "SDMT";
inline constexpr std::string_view kMsfc = "MSFC";
inline constexpr std::string_view kLesionVolume = "LESION_VOLUME";
inline constexpr std::string_view kBase = "BASE";
inline constexpr std::string_view kChange = "CHG";
}  // namespace col

// The 24-variable MS cohort dictionary.
const Schema& StandardSchema();

// Numeric variables summarized by the descriptive-statistics table.
const std::vector<std::string>& TableOneNumericColumns();
// Date variables summarized by the date table.
const std::vector<std::string>& TableOneDateColumns();
// Categorical variables fed to one-hot encoding by default.
const std::vector<std::string>& DefaultCategoricalColumns();

}  // namespace fedmed

#endif  // FEDMED_COHORT_SCHEMA_H_
