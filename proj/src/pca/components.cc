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

#include "fedmed/pca/components.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "fedmed/cohort/csv.h"
#include "fedmed/pca/jacobi.h"

namespace fedmed {

using nlohmann::json;

absl::StatusOr<PrincipalComponents> FitComponents(const OneHotEncoding& encoding, int64_t n,
                                                  const std::vector<double>& mean,
                                                  const Matrix& covariance, int k) {
  const size_t p = encoding.size();
  if (k < 1) return absl::InvalidArgumentError("component count must be >= 1");
  if (mean.size() != p || covariance.rows() != p || covariance.cols() != p) {
    return absl::InvalidArgumentError("DimensionMismatch: covariance does not match encoding");
  }
  auto eig = JacobiEigen(covariance);
  if (!eig.ok()) return eig.status();
  const size_t kk = std::min(static_cast<size_t>(k), p);

  PrincipalComponents pc;
  pc.encoding = encoding;
  pc.n = n;
  pc.mean = mean;
  pc.eigenvalues = eig->values;
  pc.components = Matrix(p, kk);
  for (size_t r = 0; r < p; ++r) {
    for (size_t c = 0; c < kk; ++c) pc.components(r, c) = eig->vectors(r, c);
  }
  for (size_t i = 0; i < p; ++i) pc.trace += covariance(i, i);
  for (size_t c = 0; c < kk; ++c) {
    pc.explained.push_back(pc.trace > 0.0 ? eig->values[c] / pc.trace : 0.0);
  }
  if (pc.trace <= 0.0) pc.warnings.push_back("ZeroVariance: covariance has zero trace");
  return pc;
}

absl::StatusOr<std::vector<double>> ProjectRow(const PrincipalComponents& pc,
                                               const std::vector<double>& x) {
  if (x.size() != pc.mean.size()) {
    return absl::InvalidArgumentError(absl::StrCat("DimensionMismatch: row has ", x.size(),
                                                   " features, components expect ",
                                                   pc.mean.size()));
  }
  std::vector<double> z(pc.k(), 0.0);
  for (size_t c = 0; c < pc.k(); ++c) {
    long double s = 0.0L;
    for (size_t r = 0; r < x.size(); ++r) {
      s += static_cast<long double>(pc.components(r, c)) * (x[r] - pc.mean[r]);
    }
    z[c] = static_cast<double>(s);
  }
  return z;
}

std::string TransformReportCsv(const PrincipalComponents& pc) {
  std::vector<std::string> header = {"feature"};
  for (size_t c = 0; c < pc.k(); ++c) header.push_back(absl::StrCat("PC", c + 1));
  std::string out = absl::StrCat(absl::StrJoin(header, ","), "\n");
  const std::vector<std::string> names = pc.encoding.FeatureNames();
  for (size_t r = 0; r < names.size(); ++r) {
    std::vector<std::string> fields = {CsvEscape(names[r])};
    for (size_t c = 0; c < pc.k(); ++c) fields.push_back(FormatNumber(pc.components(r, c)));
    absl::StrAppend(&out, absl::StrJoin(fields, ","), "\n");
  }
  return out;
}

json ComponentsToJson(const PrincipalComponents& pc) {
  json w = json::array();
  for (size_t r = 0; r < pc.components.rows(); ++r) {
    json row = json::array();
    for (size_t c = 0; c < pc.k(); ++c) row.push_back(pc.components(r, c));
    w.push_back(std::move(row));
  }
  return {{"encoding", EncodingToJson(pc.encoding)}, {"mean", pc.mean}, {"components", w}};
}

absl::StatusOr<PrincipalComponents> ComponentsFromJson(const json& j) {
  PrincipalComponents pc;
  try {
    auto enc = EncodingFromJson(j.at("encoding"));
    if (!enc.ok()) return enc.status();
    pc.encoding = *std::move(enc);
    pc.mean = j.at("mean").get<std::vector<double>>();
    const auto rows = j.at("components").get<std::vector<std::vector<double>>>();
    const size_t p = pc.encoding.size();
    if (pc.mean.size() != p || rows.size() != p || p == 0) {
      return absl::InvalidArgumentError("DimensionMismatch: components do not match encoding");
    }
    pc.components = Matrix(p, rows[0].size());
    for (size_t r = 0; r < p; ++r) {
      if (rows[r].size() != pc.components.cols()) {
        return absl::InvalidArgumentError("DimensionMismatch: ragged component matrix");
      }
      for (size_t c = 0; c < rows[r].size(); ++c) pc.components(r, c) = rows[r][c];
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
  }
  return pc;
}

absl::StatusOr<OneHotEncoding> FederatedCategoryDiscovery(
    RoundRunner& runner, const std::vector<std::string>& columns) {
  auto round = runner.RunRound(OpKind::kPcaCovariance, "pca_categories", columns, json::object());
  if (!round.ok()) return round.status();
  std::vector<std::map<std::string, std::set<std::string>>> sites;
  for (const SitePayload& site : *round) {
    std::map<std::string, std::set<std::string>> cats;
    try {
      for (const std::string& c : columns) {
        for (const auto& v : site.payload.stats.at("categories").at(c)) {
          cats[c].insert(v.get<std::string>());
        }
      }
    } catch (const json::exception& e) {
      return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
    }
    sites.push_back(std::move(cats));
  }
  return MergeCategories(columns, sites);
}

absl::StatusOr<CovarianceEstimate> FederatedCovariance(RoundRunner& runner,
                                                      const OneHotEncoding& encoding) {
  auto round = runner.RunRound(OpKind::kPcaCovariance, "pca_covariance", encoding.columns,
                               json{{"encoding", EncodingToJson(encoding)}});
  if (!round.ok()) return round.status();
  CovarianceAccumulator total = EmptyCovariance(encoding.size());
  for (const SitePayload& site : *round) {
    auto it = site.payload.supporting_counts.find("n");
    if (it == site.payload.supporting_counts.end()) {
      return absl::InvalidArgumentError("PayloadInvalid: covariance payload lacks n");
    }
    auto acc = CovarianceFromJson(site.payload.stats, it->second);
    if (!acc.ok()) return acc.status();
    auto merged = MergeCovariance(total, *acc);
    if (!merged.ok()) return merged.status();
    total = *std::move(merged);
  }
  return CovarianceFromAccumulator(total);
}

absl::StatusOr<PrincipalComponents> FederatedPca(RoundRunner& runner,
                                                 const std::vector<std::string>& columns,
                                                 int k) {
  auto encoding = FederatedCategoryDiscovery(runner, columns);
  if (!encoding.ok()) return encoding.status();
  auto est = FederatedCovariance(runner, *encoding);
  if (!est.ok()) return est.status();
  return FitComponents(*encoding, est->n, est->mean, est->covariance, k);
}

absl::StatusOr<AggregatePayload> PcaCategoriesStep(const LocalContext& context) {
  auto cats = LocalCategories(context.table, context.columns);
  if (!cats.ok()) return cats.status();
  AggregatePayload payload;
  payload.stats["categories"] = json::object();
  for (const auto& [c, set] : *cats) {
    payload.stats["categories"][c] = std::vector<std::string>(set.begin(), set.end());
  }
  return payload;
}

absl::StatusOr<AggregatePayload> PcaCovarianceStep(const LocalContext& context) {
  if (!context.broadcast.contains("encoding")) {
    return absl::InvalidArgumentError("PayloadInvalid: 'encoding' missing");
  }
  auto encoding = EncodingFromJson(context.broadcast.at("encoding"));
  if (!encoding.ok()) return encoding.status();
  if (encoding->columns != context.columns) {
    return absl::InvalidArgumentError("PayloadInvalid: encoding columns differ from request");
  }
  auto acc = LocalCovarianceTerms(context.table, *encoding);
  if (!acc.ok()) return acc.status();
  AggregatePayload payload;
  payload.stats = CovarianceToJson(*acc);
  payload.supporting_counts["n"] = acc->n;
  return payload;
}

}  // namespace fedmed
