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

#ifndef FEDMED_CORE_AUDIT_H_
#define FEDMED_CORE_AUDIT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fedmed/cohort/table.h"

namespace fedmed {

// Finds identifier values inside arbitrary text. Identifiers are split into a
// non-digit prefix and a trailing digit run; a hit is a prefix occurrence
// followed by exactly one of the known digit runs.
class IdentifierScanner {
 public:
  IdentifierScanner() = default;
  explicit IdentifierScanner(const std::vector<std::string>& identifiers);

  // All identifier-kind cells of a table.
  static IdentifierScanner ForTable(const CohortTable& table);

  void Add(const std::string& identifier);
  std::optional<std::string> FindIn(std::string_view text) const;
  bool empty() const { return by_prefix_.empty(); }

 private:
  std::map<std::string, std::set<std::string>, std::less<>> by_prefix_;
};

struct AuditFinding {
  size_t line = 0;  // 1-based line of the job log
  std::string message;  // "job=<id> round=<r> gateway=<id>"
  std::string kind;     // "identifier" or "small-count"
  std::string detail;
};

struct AuditReport {
  size_t messages_scanned = 0;
  std::vector<AuditFinding> findings;
  bool clean() const { return findings.empty(); }
};

// Scans every line of a job log. Registration lines set the cell threshold
// per dataset; any other line is checked for identifiers, and response
// payloads additionally for released counts strictly between 0 and k.
// Unparseable lines are reported as findings.
AuditReport AuditMessages(const std::vector<std::string>& lines,
                          const IdentifierScanner& identifiers, int64_t default_k = 5);

}  // namespace fedmed

#endif  // FEDMED_CORE_AUDIT_H_
