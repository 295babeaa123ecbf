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

#include "fedmed/core/audit.h"

#include <cctype>

#include "absl/strings/str_cat.h"
#include "fedmed/core/messages.h"
#include "json.hpp"

namespace fedmed {
namespace {

using nlohmann::json;

std::pair<std::string, std::string> SplitIdentifier(const std::string& id) {
  size_t cut = id.size();
  while (cut > 0 && std::isdigit(static_cast<unsigned char>(id[cut - 1]))) --cut;
  return {id.substr(0, cut), id.substr(cut)};
}

std::string MessageLabel(const json& j) {
  return absl::StrCat("job=", j.value("job_id", "?"), " round=", j.value("round", -1),
                      " gateway=", j.value("gateway_id", "?"));
}

}  // namespace

IdentifierScanner::IdentifierScanner(const std::vector<std::string>& identifiers) {
  for (const std::string& id : identifiers) Add(id);
}

IdentifierScanner IdentifierScanner::ForTable(const CohortTable& table) {
  IdentifierScanner scanner;
  for (size_t c = 0; c < table.schema().size(); ++c) {
    if (table.schema().column(c).kind != ColumnKind::kIdentifier) continue;
    for (const Row& row : table.rows()) {
      if (const auto* s = std::get_if<std::string>(&row[c])) scanner.Add(*s);
    }
  }
  return scanner;
}

void IdentifierScanner::Add(const std::string& identifier) {
  if (identifier.empty()) return;
  auto [prefix, digits] = SplitIdentifier(identifier);
  by_prefix_[prefix].insert(digits);
}

std::optional<std::string> IdentifierScanner::FindIn(std::string_view text) const {
  for (const auto& [prefix, suffixes] : by_prefix_) {
    if (prefix.empty()) {
      // Purely numeric identifiers: compare every maximal digit run.
      for (size_t i = 0; i < text.size();) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
          ++i;
          continue;
        }
        size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        std::string run(text.substr(i, j - i));
        if (suffixes.contains(run)) return run;
        i = j;
      }
      continue;
    }
    for (size_t pos = text.find(prefix); pos != std::string_view::npos;
         pos = text.find(prefix, pos + 1)) {
      size_t end = pos + prefix.size();
      while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
      std::string digits(text.substr(pos + prefix.size(), end - pos - prefix.size()));
      if (suffixes.contains(digits)) return prefix + digits;
    }
  }
  return std::nullopt;
}

AuditReport AuditMessages(const std::vector<std::string>& lines,
                          const IdentifierScanner& identifiers, int64_t default_k) {
  AuditReport report;
  std::map<std::string, int64_t> k_by_dataset;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    ++report.messages_scanned;
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      report.findings.push_back({i + 1, "?", "unparseable", "line is not a JSON object"});
      continue;
    }
    if (j.value("type", "") == "registration") {
      k_by_dataset[j.value("dataset_id", "")] = j.value("min_cell_count", default_k);
      continue;
    }
    const std::string label = MessageLabel(j);
    if (auto hit = identifiers.FindIn(line)) {
      report.findings.push_back({i + 1, label, "identifier", *hit});
    }
    if (!j.contains("payload") || !j.at("payload").is_object()) continue;
    const json& payload = j.at("payload");
    int64_t k = default_k;
    if (auto it = k_by_dataset.find(payload.value("dataset_id", "")); it != k_by_dataset.end()) {
      k = it->second;
    }
    std::vector<double> counts;
    if (payload.contains("counts")) CollectCountLeaves(payload.at("counts"), &counts);
    if (payload.contains("supporting_counts")) {
      CollectCountLeaves(payload.at("supporting_counts"), &counts);
    }
    for (double c : counts) {
      if (c > 0.0 && c < static_cast<double>(k)) {
        report.findings.push_back(
            {i + 1, label, "small-count", absl::StrCat("count ", c, " below k=", k)});
        break;
      }
    }
  }
  return report;
}

}  // namespace fedmed
