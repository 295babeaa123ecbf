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

#ifndef FEDMED_COHORT_DATE_H_
#define FEDMED_COHORT_DATE_H_

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace fedmed {

// A proleptic Gregorian calendar date. Serialized as ISO-8601 (YYYY-MM-DD).
class Date {
 public:
  // 1970-01-01.
  constexpr Date() = default;

  static absl::StatusOr<Date> Create(int year, int month, int day);
  static absl::StatusOr<Date> Parse(std::string_view iso);
  static Date FromDays(int64_t days_since_epoch);

  int64_t ToDays() const;
  std::string ToString() const;

  int year() const { return year_; }
  int month() const { return month_; }
  int day() const { return day_; }

  friend auto operator<=>(const Date&, const Date&) = default;

 private:
  constexpr Date(int y, int m, int d) : year_(y), month_(m), day_(d) {}

  int year_ = 1970;
  int month_ = 1;
  int day_ = 1;
};

// Whole days from `earlier` to `later`; negative when later < earlier.
int64_t DaysBetween(const Date& later, const Date& earlier);

bool IsLeapYear(int year);
int DaysInMonth(int year, int month);

}  // namespace fedmed

#endif  // FEDMED_COHORT_DATE_H_
