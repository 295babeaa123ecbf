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

#include "fedmed/stats/correlation.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "fedmed/cohort/csv.h"

namespace fedmed {

using nlohmann::json;

CorrelationAccumulator EmptyAccumulator(const std::vector<std::string>& columns) {
  CorrelationAccumulator acc;
  acc.columns = columns;
  acc.sum.assign(columns.size(), 0.0);
  acc.cross = Matrix(columns.size(), columns.size());
  return acc;
}

absl::StatusOr<CorrelationAccumulator> LocalCrossProducts(
    const CohortTable& table, const std::vector<std::string>& columns) {
  std::vector<std::vector<std::optional<double>>> cells;
  for (const std::string& c : columns) {
    auto col = table.NumericColumn(c);
    if (!col.ok()) return col.status();
    cells.push_back(*std::move(col));
  }
  const size_t p = columns.size();
  std::vector<long double> sum(p, 0.0L);
  std::vector<long double> cross(p * p, 0.0L);
  int64_t n = 0;
  std::vector<double> x(p);
  for (size_t r = 0; r < table.num_rows(); ++r) {
    bool complete = true;
    for (size_t i = 0; i < p && complete; ++i) {
      if (!cells[i][r]) complete = false;
      else x[i] = *cells[i][r];
    }
    if (!complete) continue;
    ++n;
    for (size_t i = 0; i < p; ++i) {
      sum[i] += x[i];
      for (size_t j = i; j < p; ++j) cross[i * p + j] += static_cast<long double>(x[i]) * x[j];
    }
  }
  CorrelationAccumulator acc = EmptyAccumulator(columns);
  acc.n = n;
  for (size_t i = 0; i < p; ++i) {
    acc.sum[i] = static_cast<double>(sum[i]);
    for (size_t j = i; j < p; ++j) {
      acc.cross(i, j) = acc.cross(j, i) = static_cast<double>(cross[i * p + j]);
    }
  }
  return acc;
}

absl::StatusOr<CorrelationAccumulator> MergeAccumulators(const CorrelationAccumulator& a,
                                                         const CorrelationAccumulator& b) {
  if (a.columns != b.columns) {
    return absl::InvalidArgumentError("ColumnMismatch: accumulators cover different columns");
  }
  CorrelationAccumulator out = a;
  out.n += b.n;
  for (size_t i = 0; i < out.sum.size(); ++i) out.sum[i] += b.sum[i];
  for (size_t i = 0; i < out.cross.data().size(); ++i) {
    out.cross.data()[i] += b.cross.data()[i];
  }
  return out;
}

CorrelationValues PearsonFromSums(const CorrelationAccumulator& acc) {
  const size_t p = acc.columns.size();
  CorrelationValues r(p, std::vector<std::optional<double>>(p));
  if (acc.n < 2) return r;
  const long double n = acc.n;
  std::vector<long double> var(p);
  std::vector<bool> usable(p);
  for (size_t i = 0; i < p; ++i) {
    const long double s = acc.sum[i];
    var[i] = static_cast<long double>(acc.cross(i, i)) - s * s / n;
    usable[i] = var[i] > 1e-13L * std::fabs(static_cast<long double>(acc.cross(i, i)));
  }
  for (size_t i = 0; i < p; ++i) {
    if (!usable[i]) continue;
    r[i][i] = 1.0;
    for (size_t j = i + 1; j < p; ++j) {
      if (!usable[j]) continue;
      const long double cov = static_cast<long double>(acc.cross(i, j)) -
                              static_cast<long double>(acc.sum[i]) * acc.sum[j] / n;
      const double v = static_cast<double>(cov / std::sqrt(var[i] * var[j]));
      r[i][j] = r[j][i] = std::clamp(v, -1.0, 1.0);
    }
  }
  return r;
}

absl::StatusOr<AggregatePayload> CrossProductsStep(const LocalContext& context) {
  auto acc = LocalCrossProducts(context.table, context.columns);
  if (!acc.ok()) return acc.status();
  AggregatePayload payload;
  json cross = json::array();
  for (size_t i = 0; i < acc->columns.size(); ++i) {
    cross.push_back(std::vector<double>(acc->cross.data().begin() + i * acc->columns.size(),
                                        acc->cross.data().begin() + (i + 1) * acc->columns.size()));
  }
  payload.stats = {{"sum", acc->sum}, {"cross", cross}};
  payload.supporting_counts["n"] = acc->n;
  return payload;
}

absl::StatusOr<CorrelationResult> FederatedCorrelation(RoundRunner& runner,
                                                       const std::vector<std::string>& columns) {
  auto sites = runner.RunRound(OpKind::kCorrelation, "crossproducts", columns, json::object());
  if (!sites.ok()) return sites.status();
  const size_t p = columns.size();
  CorrelationResult result;
  result.columns = columns;
  CorrelationAccumulator pooled = EmptyAccumulator(columns);
  for (const SitePayload& site : *sites) {
    CorrelationAccumulator acc = EmptyAccumulator(columns);
    try {
      acc.n = site.payload.supporting_counts.at("n");
      acc.sum = site.payload.stats.at("sum").get<std::vector<double>>();
      const json& cross = site.payload.stats.at("cross");
      if (acc.sum.size() != p || cross.size() != p) {
        return absl::InvalidArgumentError("PayloadInvalid: cross-product dimensions");
      }
      for (size_t i = 0; i < p; ++i) {
        for (size_t j = 0; j < p; ++j) acc.cross(i, j) = cross.at(i).at(j).get<double>();
      }
    } catch (const std::exception& e) {
      return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
    }
    auto merged = MergeAccumulators(pooled, acc);
    if (!merged.ok()) return merged.status();
    pooled = *std::move(merged);
    result.dataset_ids.push_back(site.dataset_id);
    result.per_site.push_back(PearsonFromSums(acc));
  }
  result.n = pooled.n;
  result.pooled = PearsonFromSums(pooled);
  for (size_t i = 0; i < p; ++i) {
    if (!result.pooled[i][i]) {
      return absl::FailedPreconditionError(absl::StrCat("DegenerateVariance: ", columns[i]));
    }
  }
  return result;
}

std::string CorrelationCsv(const std::vector<std::string>& columns,
                           const CorrelationValues& values) {
  std::string out = absl::StrCat(",", absl::StrJoin(columns, ","), "\n");
  for (size_t i = 0; i < columns.size(); ++i) {
    out += columns[i];
    for (size_t j = 0; j < columns.size(); ++j) {
      absl::StrAppend(&out, ",", values[i][j] ? FormatNumber(*values[i][j]) : "NA");
    }
    out += "\n";
  }
  return out;
}

}  // namespace fedmed
