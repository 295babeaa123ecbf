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

#include "fedmed/pca/steps.h"

#include "absl/strings/str_cat.h"
#include "fedmed/cohort/schema.h"

namespace fedmed {

using nlohmann::json;

json PcaToJson(const PrincipalComponents& pc) {
  json labels = json::array();
  for (size_t c = 0; c < pc.k(); ++c) labels.push_back(absl::StrCat("PC", c + 1));
  json matrix = json::array();
  for (size_t r = 0; r < pc.components.rows(); ++r) {
    json row = json::array();
    for (size_t c = 0; c < pc.k(); ++c) row.push_back(pc.components(r, c));
    matrix.push_back(std::move(row));
  }
  return {{"features", pc.encoding.FeatureNames()},
          {"components", labels},
          {"k", pc.k()},
          {"n", pc.n},
          {"mean", pc.mean},
          {"matrix", matrix},
          {"eigenvalues", pc.eigenvalues},
          {"explained_variance_ratio", pc.explained},
          {"trace", pc.trace},
          {"warnings", pc.warnings}};
}

absl::Status RegisterFedPca(Registry& registry) {
  if (absl::Status s = registry.AddStep("pca_categories", PcaCategoriesStep); !s.ok()) return s;
  if (absl::Status s = registry.AddStep("pca_covariance", PcaCovarianceStep); !s.ok()) return s;

  Workflow pca;
  pca.op_kind = OpKind::kPcaCovariance;
  pca.validate = [](const json& p) -> absl::Status {
    for (const absl::Status& s : {RequireKnownKeys(p, {"columns", "k"}),
                                  RequireStringList(p, "columns"), RequirePositiveInt(p, "k")}) {
      if (!s.ok()) return s;
    }
    return absl::OkStatus();
  };
  pca.run = [](RoundRunner& runner, const json& p) -> absl::StatusOr<json> {
    const auto columns = p.contains("columns") ? p.at("columns").get<std::vector<std::string>>()
                                               : DefaultCategoricalColumns();
    auto pc = FederatedPca(runner, columns, p.value("k", kDefaultComponents));
    if (!pc.ok()) return pc.status();
    return PcaToJson(*pc);
  };
  return registry.AddWorkflow("pca", pca);
}

}  // namespace fedmed
