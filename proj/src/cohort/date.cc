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

#include "fedmed/cohort/date.h"

#include <charconv>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace fedmed {

bool IsLeapYear(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int DaysInMonth(int year, int month) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && IsLeapYear(year)) return 29;
  return kDays[month - 1];
}

absl::StatusOr<Date> Date::Create(int year, int month, int day) {
  if (month < 1 || month > 12) {
    return absl::InvalidArgumentError(absl::StrCat("invalid month ", month));
  }
  if (day < 1 || day > DaysInMonth(year, month)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("invalid day %d for %04d-%02d", day, year, month));
  }
  return Date(year, month, day);
}

absl::StatusOr<Date> Date::Parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
    return absl::InvalidArgumentError(
        absl::StrCat("expected YYYY-MM-DD, got '", std::string(iso), "'"));
  }
  auto field = [&](size_t pos, size_t len, int& out) {
    auto [ptr, ec] = std::from_chars(iso.data() + pos, iso.data() + pos + len, out);
    return ec == std::errc() && ptr == iso.data() + pos + len;
  };
  int y = 0, m = 0, d = 0;
  if (!field(0, 4, y) || !field(5, 2, m) || !field(8, 2, d)) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected YYYY-MM-DD, got '", std::string(iso), "'"));
  }
  return Create(y, m, d);
}

// Civil-from-days / days-from-civil over 400-year eras.
int64_t Date::ToDays() const {
  const int64_t y = year_ - (month_ <= 2 ? 1 : 0);
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const int64_t yoe = y - era * 400;
  const int64_t mp = (month_ + 9) % 12;
  const int64_t doy = (153 * mp + 2) / 5 + day_ - 1;
  const int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

Date Date::FromDays(int64_t days) {
  days += 719468;
  const int64_t era = (days >= 0 ? days : days - 146096) / 146097;
  const int64_t doe = days - era * 146097;
  const int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const int64_t mp = (5 * doy + 2) / 153;
  const int d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  const int m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  const int y = static_cast<int>(yoe + era * 400 + (m <= 2 ? 1 : 0));
  return Date(y, m, d);
}

std::string Date::ToString() const {
  return absl::StrFormat("%04d-%02d-%02d", year_, month_, day_);
}

int64_t DaysBetween(const Date& later, const Date& earlier) {
  return later.ToDays() - earlier.ToDays();
}

}  // namespace fedmed
