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

#ifndef FEDMED_PCA_COVARIANCE_H_
#define FEDMED_PCA_COVARIANCE_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/cohort/table.h"
#include "fedmed/core/matrix.h"
#include "fedmed/pca/onehot.h"
#include "json.hpp"

namespace fedmed {

struct CovarianceAccumulator {
  int64_t n = 0;
  std::vector<double> sum;
  Matrix cross;  // sum of x x^T
};

CovarianceAccumulator EmptyCovariance(size_t p);

// Rows with a missing source value are skipped.
// Errors: UnknownCategory, MissingColumn, NonCategoricalColumn.
absl::StatusOr<CovarianceAccumulator> LocalCovarianceTerms(const CohortTable& table,
                                                           const OneHotEncoding& encoding);

// Errors: ColumnMismatch on dimension disagreement.
absl::StatusOr<CovarianceAccumulator> MergeCovariance(const CovarianceAccumulator& a,
                                                      const CovarianceAccumulator& b);

struct CovarianceEstimate {
  int64_t n = 0;
  std::vector<double> mean;
  Matrix covariance;
};

// C = (sum x x^T - N mu mu^T) / (N - 1).
// Errors: FailedPrecondition("InsufficientData: ...") when N < 2.
absl::StatusOr<CovarianceEstimate> CovarianceFromAccumulator(const CovarianceAccumulator& acc);

nlohmann::json CovarianceToJson(const CovarianceAccumulator& acc);
absl::StatusOr<CovarianceAccumulator> CovarianceFromJson(const nlohmann::json& stats, int64_t n);

}  // namespace fedmed

#endif  // FEDMED_PCA_COVARIANCE_H_
