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

#include "fedmed/pca/jacobi.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace fedmed {
namespace {

constexpr int kMaxSweeps = 100;

double OffDiagonalNorm(const Matrix& a) {
  double s = 0.0;
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

double FrobeniusNorm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

}  // namespace

absl::StatusOr<Eigensystem> JacobiEigen(const Matrix& c) {
  const size_t n = c.rows();
  if (c.cols() != n) return absl::InvalidArgumentError("matrix is not square");
  const double norm = FrobeniusNorm(c);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (std::fabs(c(i, j) - c(j, i)) > 1e-12 * std::max(1.0, norm)) {
        return absl::InvalidArgumentError("matrix is not symmetric");
      }
    }
  }

  Matrix a = c;
  Matrix v = Matrix::Identity(n);
  int sweeps = 0;
  const double threshold = 1e-12 * norm;
  while (OffDiagonalNorm(a) > threshold) {
    if (sweeps == kMaxSweeps) {
      return absl::FailedPreconditionError(
          absl::StrCat("NoConvergence: ", sweeps, " Jacobi sweeps"));
    }
    ++sweeps;
    for (size_t p = 0; p + 1 < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        for (size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = cs * akp - sn * akq;
          a(k, q) = sn * akp + cs * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = cs * apk - sn * aqk;
          a(q, k) = sn * apk + cs * aqk;
        }
        for (size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = cs * vkp - sn * vkq;
          v(k, q) = sn * vkp + cs * vkq;
        }
      }
    }
  }

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t x, size_t y) { return a(x, x) > a(y, y); });
  Eigensystem out;
  out.sweeps = sweeps;
  out.vectors = Matrix(n, n);
  for (size_t col = 0; col < n; ++col) {
    const size_t src = order[col];
    out.values.push_back(a(src, src));
    double biggest = 0.0;
    for (size_t k = 0; k < n; ++k) biggest = std::max(biggest, std::fabs(v(k, src)));
    double sign = 1.0;
    for (size_t k = 0; k < n; ++k) {
      if (std::fabs(v(k, src)) >= biggest * (1.0 - 1e-9)) {
        sign = v(k, src) < 0.0 ? -1.0 : 1.0;
        break;
      }
    }
    for (size_t k = 0; k < n; ++k) out.vectors(k, col) = sign * v(k, src);
  }
  return out;
}

}  // namespace fedmed
