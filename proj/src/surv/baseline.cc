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

#include "fedmed/surv/baseline.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace fedmed {
namespace {

long double Risk(const SurvivalRecord& r, const std::vector<double>& beta) {
  long double eta = 0.0L;
  for (size_t k = 0; k < beta.size() && k < r.x.size(); ++k) {
    eta += static_cast<long double>(beta[k]) * r.x[k];
  }
  return std::exp(eta);
}

// Event times with their Breslow increments d / sum of risks at risk.
std::vector<std::pair<int64_t, long double>> Increments(
    const std::vector<SurvivalRecord>& records, const std::vector<double>& beta) {
  std::set<int64_t> times;
  for (const SurvivalRecord& r : records) {
    if (r.event) times.insert(r.time);
  }
  std::vector<std::pair<int64_t, long double>> out;
  for (int64_t t : times) {
    long double d = 0.0L;
    long double risk = 0.0L;
    for (const SurvivalRecord& r : records) {
      if (r.time >= t) risk += Risk(r, beta);
      if (r.time == t && r.event) d += 1.0L;
    }
    out.emplace_back(t, d / risk);
  }
  return out;
}

}  // namespace

double EvaluateStep(const std::vector<StepPoint>& steps, int64_t t) {
  double v = 0.0;
  for (const StepPoint& s : steps) {
    if (s.time > t) break;
    v = s.value;
  }
  return v;
}

double BreslowHazardAt(const std::vector<SurvivalRecord>& records,
                       const std::vector<double>& beta, int64_t t) {
  long double h = 0.0L;
  for (const auto& [time, inc] : Increments(records, beta)) {
    if (time <= t) h += inc;
  }
  return static_cast<double>(h);
}

std::vector<StepPoint> BreslowBaseline(const std::vector<SurvivalRecord>& records,
                                       const std::vector<double>& beta,
                                       const std::vector<int64_t>& grid) {
  const auto increments = Increments(records, beta);
  std::vector<StepPoint> out;
  for (int64_t b : grid) {
    long double h = 0.0L;
    for (const auto& [time, inc] : increments) {
      if (time < b) h += inc;
    }
    out.push_back({b, static_cast<double>(h)});
  }
  return out;
}

double SurvivalFromHazard(double h0, const std::vector<double>& beta,
                          const std::vector<double>& x) {
  long double eta = 0.0L;
  for (size_t k = 0; k < beta.size() && k < x.size(); ++k) {
    eta += static_cast<long double>(beta[k]) * x[k];
  }
  return static_cast<double>(std::exp(-static_cast<long double>(h0) * std::exp(eta)));
}

std::vector<StepPoint> SurvivalCurve(const std::vector<StepPoint>& h0,
                                     const std::vector<double>& beta,
                                     const std::vector<double>& x) {
  std::vector<StepPoint> out;
  out.reserve(h0.size());
  for (const StepPoint& s : h0) out.push_back({s.time, SurvivalFromHazard(s.value, beta, x)});
  return out;
}

std::vector<StepPoint> DisplaySurvival(const std::vector<SiteBaseline>& sites,
                                       const std::vector<double>& beta) {
  std::set<int64_t> times = {0};
  int64_t total = 0;
  for (const SiteBaseline& s : sites) {
    total += s.n;
    for (const StepPoint& p : s.hazard) times.insert(p.time);
  }
  std::vector<StepPoint> out;
  if (total == 0) return out;
  for (int64_t t : times) {
    long double v = 0.0L;
    for (const SiteBaseline& s : sites) {
      v += static_cast<long double>(s.n) / static_cast<long double>(total) *
           SurvivalFromHazard(EvaluateStep(s.hazard, t), beta, s.mean_x);
    }
    out.push_back({t, static_cast<double>(v)});
  }
  return out;
}

std::vector<NormalizedCoefficient> NormalizeCoefficients(
    const std::vector<std::string>& features, const std::vector<double>& beta,
    const std::vector<double>& means) {
  std::vector<NormalizedCoefficient> out;
  for (size_t k = 0; k < features.size(); ++k) {
    NormalizedCoefficient c;
    c.feature = features[k];
    c.beta = k < beta.size() ? beta[k] : 0.0;
    c.mean = k < means.size() ? means[k] : 0.0;
    c.zero_mean = c.mean == 0.0;
    c.reported = c.zero_mean ? c.beta : c.beta * c.mean;
    out.push_back(c);
  }
  return out;
}

}  // namespace fedmed
