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

#ifndef FEDMED_CORE_PRIVACY_H_
#define FEDMED_CORE_PRIVACY_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"

namespace fedmed {

inline bool CountReleasable(int64_t count, int64_t k) { return count == 0 || count >= k; }

// Groups consecutive cells so that every count of every group is 0 or >= k.
// cells[i] holds the counts of cell i (e.g. {events, censorings}); all cells
// carry the same number of counts. A group is closed as soon as it becomes
// releasable; a trailing non-releasable remainder is folded into the groups
// before it. Returns the exclusive end index of each group, so the last
// entry is cells.size(). PermissionDenied when no grouping exists, i.e. the
// column totals themselves are not releasable.
absl::StatusOr<std::vector<size_t>> MergeToThreshold(
    const std::vector<std::vector<int64_t>>& cells, int64_t k);

// Sums cells over the groups returned by MergeToThreshold.
std::vector<std::vector<int64_t>> SumGroups(const std::vector<std::vector<int64_t>>& cells,
                                            const std::vector<size_t>& group_ends);

}  // namespace fedmed

#endif  // FEDMED_CORE_PRIVACY_H_
