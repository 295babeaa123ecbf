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

#ifndef FEDMED_SYNTH_GENERATOR_H_
#define FEDMED_SYNTH_GENERATOR_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fedmed/cohort/date.h"
#include "fedmed/cohort/table.h"
#include "json.hpp"

namespace fedmed {

struct DateWindow {
  Date min;
  Date max;
  friend bool operator==(const DateWindow&, const DateWindow&) = default;
};

struct Marginal {
  double mean = 0.0;
  double sd = 1.0;
  friend bool operator==(const Marginal&, const Marginal&) = default;
};

// One synthetic site. Lesion volume is log-normal with mean
// `lesion_volume_center` and sd noise_scales["LESION_VOLUME"]; EDSS is
//   edss_offset + lesion_edss_within_site_slope * (lesion - center)
//     + noise_scales["EDSS"] * N(0, 1),
// clamped at 0.
struct SiteGenConfig {
  std::string site_id;
  int64_t n_subjects = 0;
  double lesion_volume_center = 0.0;          // mm^3
  double lesion_edss_within_site_slope = 0.0;  // EDSS per mm^3, negative
  double edss_offset = 0.0;
  std::map<std::string, DateWindow> date_windows;  // keyed by date column
  std::map<std::string, double> noise_scales;      // keyed by column
  // Category weights per categorical column, aligned with the schema's
  // category order. Columns absent here are drawn uniformly.
  std::map<std::string, std::vector<double>> category_weights;
  uint64_t seed = 0;

  friend bool operator==(const SiteGenConfig&, const SiteGenConfig&) = default;
};

struct FederationGenConfig {
  std::vector<SiteGenConfig> sites;
  std::map<std::string, Marginal> target_marginals;
  double event_threshold = 2.0;
  double censoring_rate = 0.012;

  int64_t total_subjects() const;
  friend bool operator==(const FederationGenConfig&, const FederationGenConfig&) = default;
};

// Overall date span each generated date column must stay within.
const std::map<std::string, DateWindow>& DateVariableWindows();
// Descriptive-table means and SDs the default federation is calibrated to.
const std::map<std::string, Marginal>& TableOneTargets();

inline constexpr uint64_t kDefaultSeed = 42;

// Two sites, 693 subjects each. Site 1 has a low lesion-volume center and a
// low EDSS offset, site 2 a high center and a high offset; both share a
// negative within-site slope, so each site's lesion/EDSS correlation is
// negative while the pooled one is positive.
FederationGenConfig DefaultTwoSiteConfig();

// Site i gets seed MixSeed(seed + i).
FederationGenConfig WithSeed(FederationGenConfig config, uint64_t seed);

// InvalidArgument("ConfigInvalid: <field> ...") on violation.
absl::Status ValidateConfig(const SiteGenConfig& site, const FederationGenConfig& fed);
absl::Status ValidateConfig(const FederationGenConfig& fed);

absl::StatusOr<CohortTable> GenerateSite(const SiteGenConfig& site,
                                         const FederationGenConfig& fed);
absl::StatusOr<std::vector<CohortTable>> GenerateFederation(
    const FederationGenConfig& fed);

nlohmann::json ConfigToJson(const FederationGenConfig& fed);
absl::StatusOr<FederationGenConfig> ConfigFromJson(const nlohmann::json& j);

}  // namespace fedmed

#endif  // FEDMED_SYNTH_GENERATOR_H_
