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

#include "fedmed/pca/covariance.h"

#include "absl/strings/str_cat.h"

namespace fedmed {

using nlohmann::json;

CovarianceAccumulator EmptyCovariance(size_t p) {
  CovarianceAccumulator acc;
  acc.sum.assign(p, 0.0);
  acc.cross = Matrix(p, p);
  return acc;
}

absl::StatusOr<CovarianceAccumulator> LocalCovarianceTerms(const CohortTable& table,
                                                           const OneHotEncoding& encoding) {
  const size_t p = encoding.size();
  CovarianceAccumulator acc = EmptyCovariance(p);
  for (size_t r = 0; r < table.num_rows(); ++r) {
    auto x = EncodeRow(encoding, table, r);
    if (!x.ok()) return x.status();
    if (!x->has_value()) continue;
    const std::vector<double>& v = **x;
    ++acc.n;
    for (size_t a = 0; a < p; ++a) {
      if (v[a] == 0.0) continue;
      acc.sum[a] += v[a];
      for (size_t b = 0; b < p; ++b) acc.cross(a, b) += v[a] * v[b];
    }
  }
  return acc;
}

absl::StatusOr<CovarianceAccumulator> MergeCovariance(const CovarianceAccumulator& a,
                                                      const CovarianceAccumulator& b) {
  if (a.sum.size() != b.sum.size() || a.cross.rows() != b.cross.rows()) {
    return absl::InvalidArgumentError("ColumnMismatch: covariance dimensions differ");
  }
  CovarianceAccumulator out = a;
  out.n += b.n;
  for (size_t k = 0; k < out.sum.size(); ++k) out.sum[k] += b.sum[k];
  for (size_t k = 0; k < out.cross.data().size(); ++k) out.cross.data()[k] += b.cross.data()[k];
  return out;
}

absl::StatusOr<CovarianceEstimate> CovarianceFromAccumulator(const CovarianceAccumulator& acc) {
  if (acc.n < 2) {
    return absl::FailedPreconditionError(
        absl::StrCat("InsufficientData: covariance needs N >= 2, got ", acc.n));
  }
  const size_t p = acc.sum.size();
  const long double n = static_cast<long double>(acc.n);
  CovarianceEstimate est;
  est.n = acc.n;
  est.mean.resize(p);
  for (size_t k = 0; k < p; ++k) est.mean[k] = static_cast<double>(acc.sum[k] / n);
  est.covariance = Matrix(p, p);
  for (size_t a = 0; a < p; ++a) {
    for (size_t b = a; b < p; ++b) {
      const long double v =
          (static_cast<long double>(acc.cross(a, b)) -
           static_cast<long double>(acc.sum[a]) * static_cast<long double>(acc.sum[b]) / n) /
          (n - 1.0L);
      est.covariance(a, b) = static_cast<double>(v);
      est.covariance(b, a) = static_cast<double>(v);
    }
  }
  return est;
}

json CovarianceToJson(const CovarianceAccumulator& acc) {
  json rows = json::array();
  for (size_t r = 0; r < acc.cross.rows(); ++r) {
    json row = json::array();
    for (size_t c = 0; c < acc.cross.cols(); ++c) row.push_back(acc.cross(r, c));
    rows.push_back(std::move(row));
  }
  return {{"sum", acc.sum}, {"cross", rows}};
}

absl::StatusOr<CovarianceAccumulator> CovarianceFromJson(const json& stats, int64_t n) {
  try {
    const auto sum = stats.at("sum").get<std::vector<double>>();
    const auto rows = stats.at("cross").get<std::vector<std::vector<double>>>();
    CovarianceAccumulator acc = EmptyCovariance(sum.size());
    acc.n = n;
    acc.sum = sum;
    if (rows.size() != sum.size()) {
      return absl::InvalidArgumentError("PayloadInvalid: cross-product matrix is not square");
    }
    for (size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != sum.size()) {
        return absl::InvalidArgumentError("PayloadInvalid: cross-product matrix is not square");
      }
      for (size_t c = 0; c < rows[r].size(); ++c) acc.cross(r, c) = rows[r][c];
    }
    return acc;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
  }
}

}  // namespace fedmed
