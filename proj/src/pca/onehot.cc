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

#include "fedmed/pca/onehot.h"

#include <algorithm>

#include "absl/strings/str_cat.h"

namespace fedmed {

using nlohmann::json;

size_t OneHotEncoding::size() const {
  size_t n = 0;
  for (const auto& c : categories) n += c.size();
  return n;
}

std::vector<std::string> OneHotEncoding::FeatureNames() const {
  std::vector<std::string> names;
  for (size_t c = 0; c < columns.size(); ++c) {
    for (const std::string& cat : categories[c]) names.push_back(absl::StrCat(columns[c], "=", cat));
  }
  return names;
}

absl::StatusOr<std::map<std::string, std::set<std::string>>> LocalCategories(
    const CohortTable& table, const std::vector<std::string>& columns) {
  std::map<std::string, std::set<std::string>> out;
  for (const std::string& c : columns) {
    auto values = table.CategoricalColumn(c);
    if (!values.ok()) return values.status();
    auto& seen = out[c];
    for (const auto& v : *values) {
      if (v) seen.insert(*v);
    }
  }
  return out;
}

OneHotEncoding MergeCategories(
    const std::vector<std::string>& columns,
    const std::vector<std::map<std::string, std::set<std::string>>>& sites) {
  OneHotEncoding enc;
  enc.columns = columns;
  for (const std::string& c : columns) {
    std::set<std::string> all;
    for (const auto& site : sites) {
      if (auto it = site.find(c); it != site.end()) all.insert(it->second.begin(), it->second.end());
    }
    enc.categories.emplace_back(all.begin(), all.end());
  }
  return enc;
}

absl::StatusOr<std::optional<std::vector<double>>> EncodeRow(const OneHotEncoding& encoding,
                                                             const CohortTable& table,
                                                             size_t row) {
  std::vector<double> x(encoding.size(), 0.0);
  size_t offset = 0;
  for (size_t c = 0; c < encoding.columns.size(); ++c) {
    auto idx = table.schema().Require(encoding.columns[c]);
    if (!idx.ok()) return idx.status();
    const Cell& cell = table.rows()[row][*idx];
    if (IsMissing(cell)) return std::optional<std::vector<double>>();
    const std::string* label = std::get_if<std::string>(&cell);
    if (label == nullptr) {
      return absl::InvalidArgumentError(
          absl::StrCat("NonCategoricalColumn: ", encoding.columns[c]));
    }
    const auto& cats = encoding.categories[c];
    auto it = std::lower_bound(cats.begin(), cats.end(), *label);
    if (it == cats.end() || *it != *label) {
      return absl::InvalidArgumentError(absl::StrCat("UnknownCategory: row ", row + 1, " column ",
                                                     encoding.columns[c], " value ", *label));
    }
    x[offset + static_cast<size_t>(it - cats.begin())] = 1.0;
    offset += cats.size();
  }
  return std::optional<std::vector<double>>(std::move(x));
}

json EncodingToJson(const OneHotEncoding& encoding) {
  json cats = json::object();
  for (size_t c = 0; c < encoding.columns.size(); ++c) {
    cats[encoding.columns[c]] = encoding.categories[c];
  }
  return {{"columns", encoding.columns}, {"categories", cats}};
}

absl::StatusOr<OneHotEncoding> EncodingFromJson(const json& j) {
  OneHotEncoding enc;
  try {
    enc.columns = j.at("columns").get<std::vector<std::string>>();
    for (const std::string& c : enc.columns) {
      auto cats = j.at("categories").at(c).get<std::vector<std::string>>();
      if (!std::is_sorted(cats.begin(), cats.end()) ||
          std::adjacent_find(cats.begin(), cats.end()) != cats.end()) {
        return absl::InvalidArgumentError(
            absl::StrCat("PayloadInvalid: categories of ", c, " must be sorted and unique"));
      }
      enc.categories.push_back(std::move(cats));
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
  }
  return enc;
}

}  // namespace fedmed
