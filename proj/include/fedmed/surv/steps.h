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

#ifndef FEDMED_SURV_STEPS_H_
#define FEDMED_SURV_STEPS_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fedmed/core/registry.h"
#include "fedmed/pca/components.h"
#include "fedmed/surv/baseline.h"
#include "fedmed/surv/cox.h"
#include "fedmed/surv/km.h"
#include "json.hpp"

namespace fedmed {

// CNSR, CHG, 9HPT, T25FWT, SDMT, MSFC, RELAPSE, CDA, LESION_VOLUME.
const std::vector<std::string>& DefaultCoxFeatures();

struct CoxRequest {
  std::vector<std::string> features = DefaultCoxFeatures();
  double event_threshold = kDefaultEventThreshold;
  CoxOptions options;
  int64_t interval_width = kDefaultIntervalWidthDays;
  // When set, PC1..PCk of the one-hot projection are appended to features.
  std::optional<PrincipalComponents> pca;
};

struct CoxModel {
  std::vector<std::string> features;
  CoxFit fit;
  std::vector<SiteBaseline> baselines;
  std::vector<StepPoint> display_survival;
  std::vector<NormalizedCoefficient> normalized;
};

// Newton rounds "cox_terms" (one per likelihood evaluation), then one
// "cox_baseline" round at the fitted beta.
absl::StatusOr<CoxModel> FederatedCox(RoundRunner& runner, const CoxRequest& request);

nlohmann::json CoxToJson(const CoxModel& model);
// Header "feature,beta,mean,beta_normalized,zero_mean".
std::string CoxCoefficientsCsv(const CoxModel& model);

// Local steps "cox_terms", "cox_baseline".
absl::StatusOr<AggregatePayload> CoxTermsStep(const LocalContext& context);
absl::StatusOr<AggregatePayload> CoxBaselineStep(const LocalContext& context);

// Steps km_max_time, km_boundaries, km_counts, cox_terms, cox_baseline.
// Workflows:
//   km  {event_threshold, interval_width_days}
//   cox {features, event_threshold, num_rounds, tol, interval_width_days,
//        pca, pca_columns, pca_k}
absl::Status RegisterFedSurv(Registry& registry);

}  // namespace fedmed

#endif  // FEDMED_SURV_STEPS_H_
