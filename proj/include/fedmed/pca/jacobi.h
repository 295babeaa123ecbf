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

#ifndef FEDMED_PCA_JACOBI_H_
#define FEDMED_PCA_JACOBI_H_

#include <vector>

#include "absl/status/statusor.h"
#include "fedmed/core/matrix.h"

namespace fedmed {

struct Eigensystem {
  std::vector<double> values;  // descending
  Matrix vectors;              // column i pairs with values[i]
  int sweeps = 0;
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
// 1e-12 * ||C||_F, at most 100 sweeps. Pairs are sorted by descending value
// (stable, so ties keep axis order). Each vector's first entry of maximal
// magnitude is made positive.
// Errors: InvalidArgument for non-square or asymmetric input,
// FailedPrecondition("NoConvergence: ...").
absl::StatusOr<Eigensystem> JacobiEigen(const Matrix& c);

}  // namespace fedmed

#endif  // FEDMED_PCA_JACOBI_H_
