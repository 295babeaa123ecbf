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

#include "fedmed/stats/moments.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace fedmed {

using nlohmann::json;

absl::StatusOr<std::vector<double>> PresentValues(const CohortTable& table,
                                                  const std::string& column) {
  auto cells = table.NumericColumn(column);
  if (!cells.ok()) return cells.status();
  std::vector<double> out;
  out.reserve(cells->size());
  for (const auto& v : *cells) {
    if (v) out.push_back(*v);
  }
  return out;
}

absl::StatusOr<std::vector<MomentAggregate>> LocalMoments(
    const CohortTable& table, const std::vector<std::string>& columns) {
  std::vector<MomentAggregate> out;
  for (const std::string& column : columns) {
    auto values = PresentValues(table, column);
    if (!values.ok()) return values.status();
    MomentAggregate m;
    m.column = column;
    long double sum = 0.0L;
    long double sum_sq = 0.0L;
    for (double v : *values) {
      sum += v;
      sum_sq += static_cast<long double>(v) * v;
      m.min = m.min ? std::min(*m.min, v) : v;
      m.max = m.max ? std::max(*m.max, v) : v;
    }
    m.n = static_cast<int64_t>(values->size());
    m.sum = static_cast<double>(sum);
    m.sum_sq = static_cast<double>(sum_sq);
    out.push_back(std::move(m));
  }
  return out;
}

absl::StatusOr<MomentAggregate> MergeMoments(const MomentAggregate& a,
                                             const MomentAggregate& b) {
  if (a.column != b.column) {
    return absl::InvalidArgumentError(
        absl::StrCat("ColumnMismatch: '", a.column, "' vs '", b.column, "'"));
  }
  MomentAggregate out;
  out.column = a.column;
  out.n = a.n + b.n;
  out.sum = a.sum + b.sum;
  out.sum_sq = a.sum_sq + b.sum_sq;
  if (a.min && b.min) {
    out.min = std::min(*a.min, *b.min);
    out.max = std::max(*a.max, *b.max);
  } else {
    out.min = a.min ? a.min : b.min;
    out.max = a.max ? a.max : b.max;
  }
  return out;
}

std::optional<double> MomentMean(const MomentAggregate& m) {
  if (m.n == 0) return std::nullopt;
  return m.sum / static_cast<double>(m.n);
}

std::optional<double> MomentSd(const MomentAggregate& m) {
  if (m.n < 2) return std::nullopt;
  const long double n = m.n;
  const long double sum = m.sum;
  const long double ss = static_cast<long double>(m.sum_sq) - sum * sum / n;
  return static_cast<double>(std::sqrt(std::max(0.0L, ss / (n - 1.0L))));
}

json MomentStatsToJson(const MomentAggregate& m) {
  json j = {{"sum", m.sum}, {"sum_sq", m.sum_sq}};
  j["min"] = m.min ? json(*m.min) : json(nullptr);
  j["max"] = m.max ? json(*m.max) : json(nullptr);
  return j;
}

absl::StatusOr<MomentAggregate> MomentFromJson(const std::string& column, const json& stats,
                                               int64_t n) {
  MomentAggregate m;
  m.column = column;
  m.n = n;
  try {
    m.sum = stats.at("sum").get<double>();
    m.sum_sq = stats.at("sum_sq").get<double>();
    if (!stats.at("min").is_null()) m.min = stats.at("min").get<double>();
    if (!stats.at("max").is_null()) m.max = stats.at("max").get<double>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
  }
  if ((n > 0) != m.min.has_value()) {
    return absl::InvalidArgumentError("PayloadInvalid: min/max inconsistent with n");
  }
  return m;
}

absl::StatusOr<AggregatePayload> MomentsStep(const LocalContext& context) {
  auto moments = LocalMoments(context.table, context.columns);
  if (!moments.ok()) return moments.status();
  AggregatePayload payload;
  json columns = json::object();
  for (const MomentAggregate& m : *moments) {
    columns[m.column] = MomentStatsToJson(m);
    payload.supporting_counts["n/" + m.column] = m.n;
  }
  payload.stats["columns"] = std::move(columns);
  return payload;
}

absl::StatusOr<MomentRound> FederatedMoments(RoundRunner& runner, OpKind op,
                                             const std::vector<std::string>& columns) {
  auto sites = runner.RunRound(op, "moments", columns, json::object());
  if (!sites.ok()) return sites.status();
  MomentRound round;
  for (const std::string& c : columns) {
    MomentAggregate empty;
    empty.column = c;
    round.pooled.push_back(std::move(empty));
  }
  for (const SitePayload& site : *sites) {
    std::vector<MomentAggregate> local;
    for (size_t i = 0; i < columns.size(); ++i) {
      const std::string& c = columns[i];
      auto n = site.payload.supporting_counts.find("n/" + c);
      if (n == site.payload.supporting_counts.end() ||
          !site.payload.stats.contains("columns") ||
          !site.payload.stats.at("columns").contains(c)) {
        return absl::InvalidArgumentError(
            absl::StrCat("PayloadInvalid: moments for '", c, "' missing from ", site.dataset_id));
      }
      auto m = MomentFromJson(c, site.payload.stats.at("columns").at(c), n->second);
      if (!m.ok()) return m.status();
      auto merged = MergeMoments(round.pooled[i], *m);
      if (!merged.ok()) return merged.status();
      round.pooled[i] = *merged;
      local.push_back(*std::move(m));
    }
    round.dataset_ids.push_back(site.dataset_id);
    round.per_site.push_back(std::move(local));
  }
  return round;
}

}  // namespace fedmed
