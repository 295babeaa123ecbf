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

#include "fedmed/surv/cox.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace fedmed {
namespace {

double InfNorm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// Cholesky of a symmetric positive definite matrix in place (lower). False
// if a pivot is not positive.
bool Cholesky(std::vector<std::vector<long double>>& a) {
  const size_t n = a.size();
  for (size_t j = 0; j < n; ++j) {
    long double d = a[j][j];
    for (size_t k = 0; k < j; ++k) d -= a[j][k] * a[j][k];
    if (!(d > 0.0L)) return false;
    a[j][j] = std::sqrt(d);
    for (size_t i = j + 1; i < n; ++i) {
      long double s = a[i][j];
      for (size_t k = 0; k < j; ++k) s -= a[i][k] * a[j][k];
      a[i][j] = s / a[j][j];
    }
  }
  return true;
}

std::vector<long double> CholeskySolve(const std::vector<std::vector<long double>>& l,
                                       std::vector<long double> b) {
  const size_t n = l.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < i; ++k) b[i] -= l[i][k] * b[k];
    b[i] /= l[i][i];
  }
  for (size_t i = n; i-- > 0;) {
    for (size_t k = i + 1; k < n; ++k) b[i] -= l[k][i] * b[k];
    b[i] /= l[i][i];
  }
  return b;
}

}  // namespace

CoxTerms ZeroCoxTerms(size_t p) {
  CoxTerms t;
  t.gradient.assign(p, 0.0);
  t.hessian = Matrix(p, p);
  return t;
}

absl::StatusOr<CoxTerms> LocalCoxTerms(const std::vector<SurvivalRecord>& records,
                                       const std::vector<double>& beta) {
  const size_t p = beta.size();
  for (const SurvivalRecord& r : records) {
    if (r.x.size() != p) {
      return absl::InvalidArgumentError(
          absl::StrCat("covariate length ", r.x.size(), " does not match beta length ", p));
    }
  }
  CoxTerms terms = ZeroCoxTerms(p);
  terms.n = static_cast<int64_t>(records.size());
  for (const SurvivalRecord& r : records) terms.events += r.event ? 1 : 0;
  if (terms.events == 0) return terms;

  // Centering on the stratum mean leaves the likelihood unchanged and keeps
  // the exponentials well scaled.
  std::vector<long double> mean(p, 0.0L);
  for (const SurvivalRecord& r : records) {
    for (size_t k = 0; k < p; ++k) mean[k] += r.x[k];
  }
  for (auto& m : mean) m /= static_cast<long double>(records.size());

  const size_t n = records.size();
  std::vector<std::vector<long double>> z(n, std::vector<long double>(p));
  std::vector<long double> eta(n, 0.0L);
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < p; ++k) {
      z[i][k] = records[i].x[k] - mean[k];
      eta[i] += static_cast<long double>(beta[k]) * z[i][k];
    }
  }
  const long double shift = *std::max_element(eta.begin(), eta.end());

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return records[a].time > records[b].time; });

  long double loglik = 0.0L;
  std::vector<long double> grad(p, 0.0L);
  std::vector<std::vector<long double>> hess(p, std::vector<long double>(p, 0.0L));
  long double s0 = 0.0L;
  std::vector<long double> s1(p, 0.0L);
  std::vector<std::vector<long double>> s2(p, std::vector<long double>(p, 0.0L));

  size_t i = 0;
  while (i < n) {
    const int64_t t = records[order[i]].time;
    size_t j = i;
    int64_t d = 0;
    std::vector<long double> event_sum(p, 0.0L);
    long double event_eta = 0.0L;
    for (; j < n && records[order[j]].time == t; ++j) {
      const size_t r = order[j];
      const long double w = std::exp(eta[r] - shift);
      s0 += w;
      for (size_t a = 0; a < p; ++a) {
        s1[a] += w * z[r][a];
        for (size_t b = 0; b <= a; ++b) s2[a][b] += w * z[r][a] * z[r][b];
      }
      if (records[r].event) {
        ++d;
        event_eta += eta[r];
        for (size_t a = 0; a < p; ++a) event_sum[a] += z[r][a];
      }
    }
    if (d > 0) {
      const long double dd = static_cast<long double>(d);
      loglik += event_eta - dd * (std::log(s0) + shift);
      for (size_t a = 0; a < p; ++a) {
        const long double ma = s1[a] / s0;
        grad[a] += event_sum[a] - dd * ma;
        for (size_t b = 0; b <= a; ++b) {
          hess[a][b] -= dd * (s2[a][b] / s0 - ma * (s1[b] / s0));
        }
      }
    }
    i = j;
  }

  terms.loglik = static_cast<double>(loglik);
  for (size_t a = 0; a < p; ++a) {
    terms.gradient[a] = static_cast<double>(grad[a]);
    for (size_t b = 0; b <= a; ++b) {
      terms.hessian(a, b) = static_cast<double>(hess[a][b]);
      terms.hessian(b, a) = static_cast<double>(hess[a][b]);
    }
  }
  return terms;
}

absl::Status AddCoxTerms(CoxTerms& a, const CoxTerms& b) {
  if (a.gradient.size() != b.gradient.size() || a.hessian.rows() != b.hessian.rows() ||
      a.hessian.cols() != b.hessian.cols()) {
    return absl::InvalidArgumentError("ColumnMismatch: Cox term dimensions differ");
  }
  a.loglik += b.loglik;
  for (size_t k = 0; k < a.gradient.size(); ++k) a.gradient[k] += b.gradient[k];
  for (size_t k = 0; k < a.hessian.data().size(); ++k) {
    a.hessian.data()[k] += b.hessian.data()[k];
  }
  a.events += b.events;
  a.n += b.n;
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> SolveNewtonStep(const Matrix& hessian,
                                                    const std::vector<double>& gradient) {
  const size_t p = gradient.size();
  if (hessian.rows() != p || hessian.cols() != p) {
    return absl::InvalidArgumentError("Hessian and gradient dimensions differ");
  }
  std::vector<size_t> active;
  for (size_t k = 0; k < p; ++k) {
    if (-hessian(k, k) > 0.0) active.push_back(k);
  }
  std::vector<double> delta(p, 0.0);
  if (active.empty()) return delta;
  const size_t m = active.size();

  // Diagonal scaling so the ridge and pivots are scale free.
  std::vector<long double> scale(m);
  for (size_t a = 0; a < m; ++a) scale[a] = std::sqrt(-hessian(active[a], active[a]));
  std::vector<long double> rhs(m);
  for (size_t a = 0; a < m; ++a) rhs[a] = gradient[active[a]] / scale[a];

  for (const long double ridge : {0.0L, 1e-8L}) {
    std::vector<std::vector<long double>> l(m, std::vector<long double>(m));
    for (size_t a = 0; a < m; ++a) {
      for (size_t b = 0; b < m; ++b) {
        l[a][b] = -hessian(active[a], active[b]) / (scale[a] * scale[b]);
      }
      l[a][a] += ridge;
    }
    if (!Cholesky(l)) continue;
    const std::vector<long double> y = CholeskySolve(l, rhs);
    for (size_t a = 0; a < m; ++a) delta[active[a]] = static_cast<double>(y[a] / scale[a]);
    return delta;
  }
  return absl::FailedPreconditionError(
      "SingularHessian: negated Hessian is not positive definite after ridge 1e-8");
}

absl::StatusOr<CoxFit> MaximizePartialLikelihood(const CoxEvaluator& evaluator, size_t p,
                                                 const CoxOptions& options) {
  CoxFit fit;
  fit.beta.assign(p, 0.0);
  auto current = evaluator(fit.beta);
  fit.rounds = 1;
  if (!current.ok()) return current.status();
  if (current->events == 0) {
    return absl::FailedPreconditionError("NoEvents: no site reported an event");
  }

  while (true) {
    fit.loglik = current->loglik;
    fit.gradient_norm = InfNorm(current->gradient);
    if (fit.gradient_norm < options.grad_tol) {
      fit.converged = true;
      break;
    }
    auto delta = SolveNewtonStep(current->hessian, current->gradient);
    if (!delta.ok()) return delta.status();

    double step = 1.0;
    std::optional<CoxTerms> accepted;
    std::vector<double> candidate(p);
    for (int halving = 0; halving <= options.max_halvings; ++halving) {
      if (fit.rounds >= options.max_rounds) {
        return absl::FailedPreconditionError(absl::StrFormat(
            "NotConverged: %d rounds, loglik %.12g, gradient norm %.3g", fit.rounds,
            fit.loglik, fit.gradient_norm));
      }
      for (size_t k = 0; k < p; ++k) candidate[k] = fit.beta[k] + step * (*delta)[k];
      auto next = evaluator(candidate);
      ++fit.rounds;
      if (!next.ok()) return next.status();
      if (std::isfinite(next->loglik) && next->loglik >= current->loglik - options.tol) {
        accepted = std::move(*next);
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "NotConverged: step halving exhausted after %d rounds", fit.rounds));
    }
    ++fit.iterations;
    const double change = accepted->loglik - current->loglik;
    fit.beta = candidate;
    current = std::move(*accepted);
    if (std::fabs(change) < options.tol) {
      fit.loglik = current->loglik;
      fit.gradient_norm = InfNorm(current->gradient);
      fit.converged = true;
      break;
    }
  }
  for (size_t k = 0; k < p; ++k) {
    if (std::fabs(fit.beta[k]) > options.monotone_bound) {
      fit.warnings.push_back(absl::StrFormat(
          "MonotoneLikelihood: coefficient %d has magnitude %.3g", static_cast<int>(k),
          std::fabs(fit.beta[k])));
    }
  }
  return fit;
}

}  // namespace fedmed
