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

// Regenerates tests/golden/omop from the two-row fixture cohort.
//
//   omop_golden_writer <dir>

#include <iostream>

#include "fedmed/cohort/omop.h"
#include "tests/testing/fixtures.h"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: omop_golden_writer <dir>\n";
    return 2;
  }
  auto sets = fedmed::ExportOmop(fedmed::testing::TwoRowCohort());
  if (!sets.ok()) {
    std::cerr << sets.status() << "\n";
    return 1;
  }
  if (absl::Status s = fedmed::WriteOmop(*sets, argv[1]); !s.ok()) {
    std::cerr << s << "\n";
    return 1;
  }
  return 0;
}
