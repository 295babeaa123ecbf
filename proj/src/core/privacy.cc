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

#include "fedmed/core/privacy.h"

#include "absl/status/status.h"

namespace fedmed {
namespace {

bool AllReleasable(const std::vector<int64_t>& counts, int64_t k) {
  for (int64_t c : counts) {
    if (!CountReleasable(c, k)) return false;
  }
  return true;
}

void Accumulate(std::vector<int64_t>& into, const std::vector<int64_t>& from) {
  for (size_t j = 0; j < into.size(); ++j) into[j] += from[j];
}

}  // namespace

absl::StatusOr<std::vector<size_t>> MergeToThreshold(
    const std::vector<std::vector<int64_t>>& cells, int64_t k) {
  std::vector<size_t> ends;
  if (cells.empty()) return ends;
  const size_t width = cells.front().size();
  std::vector<std::vector<int64_t>> group_sums;
  std::vector<int64_t> open(width, 0);
  bool has_open = false;
  for (size_t i = 0; i < cells.size(); ++i) {
    Accumulate(open, cells[i]);
    has_open = true;
    if (AllReleasable(open, k)) {
      ends.push_back(i + 1);
      group_sums.push_back(open);
      open.assign(width, 0);
      has_open = false;
    }
  }
  if (has_open) {
    // Fold the remainder leftwards until the merged group is releasable.
    while (!group_sums.empty()) {
      Accumulate(open, group_sums.back());
      group_sums.pop_back();
      ends.pop_back();
      if (AllReleasable(open, k)) break;
    }
    if (!AllReleasable(open, k)) {
      return absl::PermissionDeniedError(
          "PolicyDenied: counts cannot be merged above the cell threshold");
    }
    ends.push_back(cells.size());
    group_sums.push_back(open);
  }
  return ends;
}

std::vector<std::vector<int64_t>> SumGroups(const std::vector<std::vector<int64_t>>& cells,
                                            const std::vector<size_t>& group_ends) {
  std::vector<std::vector<int64_t>> out;
  size_t begin = 0;
  for (size_t end : group_ends) {
    std::vector<int64_t> sum(cells.empty() ? 0 : cells.front().size(), 0);
    for (size_t i = begin; i < end; ++i) Accumulate(sum, cells[i]);
    out.push_back(std::move(sum));
    begin = end;
  }
  return out;
}

}  // namespace fedmed
