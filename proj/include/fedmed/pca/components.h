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

#ifndef FEDMED_PCA_COMPONENTS_H_
#define FEDMED_PCA_COMPONENTS_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/core/matrix.h"
#include "fedmed/core/registry.h"
#include "fedmed/pca/covariance.h"
#include "fedmed/pca/onehot.h"
#include "json.hpp"

namespace fedmed {

inline constexpr int kDefaultComponents = 4;

struct PrincipalComponents {
  OneHotEncoding encoding;
  int64_t n = 0;
  std::vector<double> mean;
  std::vector<double> eigenvalues;  // all of them, descending
  Matrix components;                // features x k
  std::vector<double> explained;    // lambda_i / trace for the top k
  double trace = 0.0;
  std::vector<std::string> warnings;

  size_t k() const { return components.cols(); }
};

// Top-k eigenpairs of the covariance. k is clamped to the feature count.
// Errors: InvalidArgument for k < 1 or mismatched sizes, NoConvergence.
absl::StatusOr<PrincipalComponents> FitComponents(const OneHotEncoding& encoding, int64_t n,
                                                  const std::vector<double>& mean,
                                                  const Matrix& covariance, int k);

// z = W^T (x - mu). Errors: InvalidArgument("DimensionMismatch: ...").
absl::StatusOr<std::vector<double>> ProjectRow(const PrincipalComponents& pc,
                                               const std::vector<double>& x);

// Header "feature,PC1,...,PCk"; one row per one-hot feature.
std::string TransformReportCsv(const PrincipalComponents& pc);

// Everything a gateway needs to project rows: encoding, mean, components.
nlohmann::json ComponentsToJson(const PrincipalComponents& pc);
absl::StatusOr<PrincipalComponents> ComponentsFromJson(const nlohmann::json& j);

// Round 1 "pca_categories", round 2 "pca_covariance", then the
// eigendecomposition on the orchestrator.
absl::StatusOr<OneHotEncoding> FederatedCategoryDiscovery(RoundRunner& runner,
                                                          const std::vector<std::string>& columns);
absl::StatusOr<CovarianceEstimate> FederatedCovariance(RoundRunner& runner,
                                                      const OneHotEncoding& encoding);
absl::StatusOr<PrincipalComponents> FederatedPca(RoundRunner& runner,
                                                 const std::vector<std::string>& columns,
                                                 int k = kDefaultComponents);

absl::StatusOr<AggregatePayload> PcaCategoriesStep(const LocalContext& context);
absl::StatusOr<AggregatePayload> PcaCovarianceStep(const LocalContext& context);

}  // namespace fedmed

#endif  // FEDMED_PCA_COMPONENTS_H_
