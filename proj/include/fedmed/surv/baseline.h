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

#ifndef FEDMED_SURV_BASELINE_H_
#define FEDMED_SURV_BASELINE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "fedmed/surv/survival.h"

namespace fedmed {

// Right-continuous step function: value(t) is the value of the last point
// with time <= t, and 0 before the first point.
struct StepPoint {
  int64_t time = 0;
  double value = 0.0;

  friend bool operator==(const StepPoint&, const StepPoint&) = default;
};

double EvaluateStep(const std::vector<StepPoint>& steps, int64_t t);

// Breslow cumulative baseline hazard including all event times <= t.
double BreslowHazardAt(const std::vector<SurvivalRecord>& records,
                       const std::vector<double>& beta, int64_t t);

// H0 at each grid boundary b > 0, counting events with time < b, labelled
// b. The first point is (0, 0) when grid starts at 0.
std::vector<StepPoint> BreslowBaseline(const std::vector<SurvivalRecord>& records,
                                       const std::vector<double>& beta,
                                       const std::vector<int64_t>& grid);

// S(t | x) = exp(-H0(t) * exp(beta . x)).
double SurvivalFromHazard(double h0, const std::vector<double>& beta,
                          const std::vector<double>& x);
std::vector<StepPoint> SurvivalCurve(const std::vector<StepPoint>& h0,
                                     const std::vector<double>& beta,
                                     const std::vector<double>& x);

struct SiteBaseline {
  std::string dataset_id;
  int64_t n = 0;
  std::vector<double> mean_x;
  std::vector<StepPoint> hazard;
};

// Population curve: sum over sites of (n_s / N) * S_s(t | mean_x_s), on the
// union of the sites' grid points.
std::vector<StepPoint> DisplaySurvival(const std::vector<SiteBaseline>& sites,
                                       const std::vector<double>& beta);

struct NormalizedCoefficient {
  std::string feature;
  double beta = 0.0;
  double mean = 0.0;
  double reported = 0.0;
  bool zero_mean = false;  // reported holds raw beta
};

std::vector<NormalizedCoefficient> NormalizeCoefficients(
    const std::vector<std::string>& features, const std::vector<double>& beta,
    const std::vector<double>& means);

}  // namespace fedmed

#endif  // FEDMED_SURV_BASELINE_H_
