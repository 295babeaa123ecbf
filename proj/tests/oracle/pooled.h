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

#ifndef FEDMED_TESTS_ORACLE_POOLED_H_
#define FEDMED_TESTS_ORACLE_POOLED_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/cohort/table.h"

// Centralized reference computations over concatenated data. Test-only, and
// written without any of the federated numerical kernels.
namespace fedmed::oracle {

// Concatenation of all site tables plus a site label per row.
struct PooledDataset {
  CohortTable table;
  std::vector<int> site;  // index into the input table list
};

absl::StatusOr<PooledDataset> Pool(const std::vector<CohortTable>& tables);

// Present values of a numeric or date column.
std::vector<double> Values(const CohortTable& table, const std::string& column);

struct Summary {
  int64_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Exact order statistics: the q-quantile is the ceil(q n)-th smallest value.
Summary Summarize(std::vector<double> values);
double OrderQuantile(std::vector<double> values, double q);

// Two-pass Pearson over complete pairs; nullopt for zero variance or n < 2.
std::optional<double> Pearson(const std::vector<std::optional<double>>& x,
                              const std::vector<std::optional<double>>& y);
std::optional<double> PearsonColumns(const CohortTable& table, const std::string& a,
                                     const std::string& b,
                                     const std::vector<std::string>& complete_on);

struct Subject {
  int stratum = 0;
  int64_t time = 0;
  bool event = false;
  std::vector<double> x;
};

// Subjects with time = VISITDT - DIAGDT, event = EDSS > threshold and
// CNSR == 0, complete cases over the survival columns and features.
std::vector<Subject> Subjects(const PooledDataset& pooled, double threshold,
                              const std::vector<std::string>& features);

struct KmStep {
  int64_t t_lo = 0;
  int64_t t_hi = 0;
  int64_t d = 0;
  int64_t n = 0;
  double s = 1.0;
};

// Product limit on a given interval grid, counting directly from subjects.
std::vector<KmStep> KaplanMeier(const std::vector<Subject>& subjects,
                                const std::vector<int64_t>& boundaries);

// Stratified Breslow partial likelihood and derivatives, by direct O(n^2)
// risk-set sums.
double StratifiedLoglik(const std::vector<Subject>& subjects, const std::vector<double>& beta);
std::vector<double> StratifiedGradient(const std::vector<Subject>& subjects,
                                       const std::vector<double>& beta);
std::vector<std::vector<double>> StratifiedHessian(const std::vector<Subject>& subjects,
                                                   const std::vector<double>& beta);

struct CoxResult {
  std::vector<double> beta;
  double loglik = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Newton ascent from 0 with step halving, stopping on |d loglik| < tol or
// gradient infinity norm < grad_tol.
CoxResult CentralizedStratifiedCox(const std::vector<Subject>& subjects, size_t p,
                                   int max_evaluations = 200, double tol = 1e-9,
                                   double grad_tol = 1e-8);

struct Pca {
  std::vector<std::string> features;
  std::vector<double> mean;
  std::vector<std::vector<double>> covariance;
  std::vector<double> eigenvalues;                 // descending
  std::vector<std::vector<double>> eigenvectors;   // eigenvectors[i] pairs with eigenvalues[i]
};

// One-hot over sorted pooled categories, two-pass covariance, dense
// self-adjoint eigensolver.
Pca PooledPca(const CohortTable& pooled, const std::vector<std::string>& columns);

}  // namespace fedmed::oracle

#endif  // FEDMED_TESTS_ORACLE_POOLED_H_
