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

#ifndef FEDMED_SURV_COX_H_
#define FEDMED_SURV_COX_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/core/matrix.h"
#include "fedmed/surv/survival.h"

namespace fedmed {

// Breslow log partial likelihood of one stratum and its exact first and
// second derivatives.
struct CoxTerms {
  double loglik = 0.0;
  std::vector<double> gradient;
  Matrix hessian;
  int64_t events = 0;
  int64_t n = 0;
};

CoxTerms ZeroCoxTerms(size_t p);

// beta.size() must equal every record's x.size(); otherwise InvalidArgument.
// A stratum without events yields zero terms.
absl::StatusOr<CoxTerms> LocalCoxTerms(const std::vector<SurvivalRecord>& records,
                                       const std::vector<double>& beta);

// Adds b into a. Dimensions must agree.
absl::Status AddCoxTerms(CoxTerms& a, const CoxTerms& b);

struct CoxOptions {
  int max_rounds = 30;  // likelihood evaluations, including step halvings
  double tol = 1e-9;
  double grad_tol = 1e-8;
  int max_halvings = 10;
  double monotone_bound = 50.0;
};

struct CoxFit {
  std::vector<double> beta;
  double loglik = 0.0;
  double gradient_norm = 0.0;  // infinity norm at beta
  int rounds = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

using CoxEvaluator = std::function<absl::StatusOr<CoxTerms>(const std::vector<double>& beta)>;

// Newton ascent from beta = 0 with step halving.
// Errors: FailedPrecondition("SingularHessian ..."), FailedPrecondition
// ("NotConverged: <rounds> rounds ..."), plus whatever the evaluator returns.
absl::StatusOr<CoxFit> MaximizePartialLikelihood(const CoxEvaluator& evaluator, size_t p,
                                                 const CoxOptions& options = {});

// Solves (-H) delta = g. Coordinates whose diagonal of -H is not positive
// get delta 0. Retries once with a 1e-8 ridge before SingularHessian.
absl::StatusOr<std::vector<double>> SolveNewtonStep(const Matrix& hessian,
                                                    const std::vector<double>& gradient);

}  // namespace fedmed

#endif  // FEDMED_SURV_COX_H_
