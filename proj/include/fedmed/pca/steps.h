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

#ifndef FEDMED_PCA_STEPS_H_
#define FEDMED_PCA_STEPS_H_

#include "absl/status/status.h"
#include "fedmed/core/registry.h"
#include "fedmed/pca/components.h"
#include "json.hpp"

namespace fedmed {

// Heat-map data: features, PC labels, matrix, eigenvalues, explained ratios.
nlohmann::json PcaToJson(const PrincipalComponents& pc);

// Steps "pca_categories", "pca_covariance"; workflow "pca" {columns, k}.
absl::Status RegisterFedPca(Registry& registry);

}  // namespace fedmed

#endif  // FEDMED_PCA_STEPS_H_
