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

#include "fedmed/stats/tableone.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "absl/strings/str_cat.h"
#include "fedmed/cohort/csv.h"
#include "fedmed/cohort/date.h"
#include "fedmed/stats/moments.h"

namespace fedmed {
namespace {

using nlohmann::json;

std::string DateText(double days) {
  return Date::FromDays(static_cast<int64_t>(std::llround(days))).ToString();
}

json FiveNumberToJson(const FiveNumber& f) {
  return {{"variable", f.variable}, {"n", f.n},           {"min", f.min}, {"q1", f.q1},
          {"median", f.median},     {"q3", f.q3},         {"max", f.max}};
}

}  // namespace

absl::StatusOr<std::vector<TableOneRow>> FederatedTableOne(
    RoundRunner& runner, const std::vector<std::string>& numeric_columns,
    const std::vector<std::string>& date_columns, int bins) {
  std::vector<std::string> columns = numeric_columns;
  columns.insert(columns.end(), date_columns.begin(), date_columns.end());
  auto moments = FederatedMoments(runner, OpKind::kTableOne, columns);
  if (!moments.ok()) return moments.status();

  std::map<std::string, ColumnRange> ranges;
  for (const MomentAggregate& m : moments->pooled) {
    ranges[m.column] = {m.min.value_or(0.0), m.max.value_or(0.0), m.n};
  }
  auto quantiles = QuantilesForRanges(runner, OpKind::kTableOne, ranges, {0.25, 0.5, 0.75}, bins);
  if (!quantiles.ok()) return quantiles.status();

  std::vector<TableOneRow> rows;
  for (size_t i = 0; i < columns.size(); ++i) {
    const MomentAggregate& m = moments->pooled[i];
    const std::vector<double>& q = quantiles->at(m.column);
    TableOneRow row;
    row.variable = m.column;
    row.is_date = i >= numeric_columns.size();
    row.n = m.n;
    row.min = *m.min;
    row.max = *m.max;
    row.q1 = q[0];
    row.median = q[1];
    row.q3 = q[2];
    if (row.is_date) {
      row.q1 = std::round(row.q1);
      row.median = std::round(row.median);
      row.q3 = std::round(row.q3);
    } else {
      row.mean = MomentMean(m);
      row.sd = MomentSd(m);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double ExactQuantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double rank = std::ceil(q * static_cast<double>(values.size()));
  const size_t index = rank < 1.0 ? 0 : static_cast<size_t>(rank) - 1;
  return values[std::min(index, values.size() - 1)];
}

absl::StatusOr<FiveNumber> LocalFiveNumber(const std::vector<double>& values,
                                           const std::string& variable) {
  if (values.empty()) {
    return absl::FailedPreconditionError(absl::StrCat("DegenerateRange: ", variable, " has no values"));
  }
  FiveNumber f;
  f.variable = variable;
  f.n = static_cast<int64_t>(values.size());
  f.min = *std::min_element(values.begin(), values.end());
  f.max = *std::max_element(values.begin(), values.end());
  f.q1 = ExactQuantile(values, 0.25);
  f.median = ExactQuantile(values, 0.5);
  f.q3 = ExactQuantile(values, 0.75);
  return f;
}

absl::StatusOr<AggregatePayload> FiveNumberStep(const LocalContext& context) {
  AggregatePayload payload;
  for (const std::string& column : context.columns) {
    auto values = PresentValues(context.table, column);
    if (!values.ok()) return values.status();
    if (static_cast<int64_t>(values->size()) < context.policy.min_cohort_size) {
      return absl::PermissionDeniedError(absl::StrCat(
          "PolicyDenied: cohort-too-small for a site summary of ", column));
    }
    auto f = LocalFiveNumber(*values, column);
    if (!f.ok()) return f.status();
    payload.stats[column] = {
        {"min", f->min}, {"q1", f->q1}, {"median", f->median}, {"q3", f->q3}, {"max", f->max}};
    payload.supporting_counts["n/" + column] = f->n;
  }
  return payload;
}

absl::StatusOr<BoxplotResult> FederatedBoxplot(RoundRunner& runner,
                                               const std::vector<std::string>& columns,
                                               bool per_site, int bins) {
  auto rows = FederatedTableOne(runner, columns, {}, bins);
  if (!rows.ok()) return rows.status();
  BoxplotResult result;
  for (const TableOneRow& r : *rows) {
    result.federated.push_back({r.variable, r.n, r.min, r.q1, r.median, r.q3, r.max});
  }
  if (!per_site) return result;

  auto sites = runner.RunRound(OpKind::kTableOne, "five_number", columns, json::object());
  if (!sites.ok()) return sites.status();
  for (const SitePayload& site : *sites) {
    std::vector<FiveNumber> summaries;
    try {
      for (const std::string& column : columns) {
        const json& s = site.payload.stats.at(column);
        summaries.push_back({column, site.payload.supporting_counts.at("n/" + column),
                             s.at("min").get<double>(), s.at("q1").get<double>(),
                             s.at("median").get<double>(), s.at("q3").get<double>(),
                             s.at("max").get<double>()});
      }
    } catch (const std::exception& e) {
      return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
    }
    result.dataset_ids.push_back(site.dataset_id);
    result.per_site.push_back(std::move(summaries));
  }
  return result;
}

std::string TableOneCsv(const std::vector<TableOneRow>& rows) {
  std::string out = "variable,n,mean,sd,min,q1,median,q3,max\n";
  auto num = [](const std::optional<double>& v) { return v ? FormatNumber(*v) : "NA"; };
  for (const TableOneRow& r : rows) {
    if (r.is_date) continue;
    absl::StrAppend(&out, r.variable, ",", r.n, ",", num(r.mean), ",", num(r.sd), ",",
                    FormatNumber(r.min), ",", FormatNumber(r.q1), ",", FormatNumber(r.median),
                    ",", FormatNumber(r.q3), ",", FormatNumber(r.max), "\n");
  }
  return out;
}

std::string TableOneDatesCsv(const std::vector<TableOneRow>& rows) {
  std::string out = "variable,n,min,q1,median,q3,max\n";
  for (const TableOneRow& r : rows) {
    if (!r.is_date) continue;
    absl::StrAppend(&out, r.variable, ",", r.n, ",", DateText(r.min), ",", DateText(r.q1), ",",
                    DateText(r.median), ",", DateText(r.q3), ",", DateText(r.max), "\n");
  }
  return out;
}

json BoxplotToJson(const BoxplotResult& result) {
  json federated = json::array();
  for (const FiveNumber& f : result.federated) federated.push_back(FiveNumberToJson(f));
  json per_site = json::object();
  for (size_t s = 0; s < result.per_site.size(); ++s) {
    json site = json::array();
    for (const FiveNumber& f : result.per_site[s]) site.push_back(FiveNumberToJson(f));
    per_site[result.dataset_ids[s]] = std::move(site);
  }
  return {{"federated", federated}, {"per_site", per_site}};
}

}  // namespace fedmed
