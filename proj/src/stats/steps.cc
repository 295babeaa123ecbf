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

#include "fedmed/stats/steps.h"

#include <cmath>

#include "fedmed/cohort/date.h"
#include "fedmed/cohort/schema.h"
#include "fedmed/stats/moments.h"
#include "fedmed/stats/quantiles.h"
#include "fedmed/stats/scatter.h"

namespace fedmed {
namespace {

using nlohmann::json;

std::vector<std::string> StringsOr(const json& params, const char* key,
                                   const std::vector<std::string>& fallback) {
  return params.contains(key) ? params.at(key).get<std::vector<std::string>>() : fallback;
}

json Optional(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json ValuesToJson(const CorrelationValues& values) {
  json out = json::array();
  for (const auto& row : values) {
    json r = json::array();
    for (const auto& v : row) r.push_back(Optional(v));
    out.push_back(std::move(r));
  }
  return out;
}

template <typename... Checks>
absl::Status FirstError(Checks... checks) {
  for (const absl::Status& s : {checks...}) {
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

}  // namespace

json TableOneToJson(const std::vector<TableOneRow>& rows) {
  json numeric = json::array();
  json dates = json::array();
  for (const TableOneRow& r : rows) {
    if (r.is_date) {
      auto text = [](double d) {
        return Date::FromDays(static_cast<int64_t>(std::llround(d))).ToString();
      };
      dates.push_back({{"variable", r.variable}, {"n", r.n}, {"min", text(r.min)},
                       {"q1", text(r.q1)}, {"median", text(r.median)}, {"q3", text(r.q3)},
                       {"max", text(r.max)}});
    } else {
      numeric.push_back({{"variable", r.variable}, {"n", r.n}, {"mean", Optional(r.mean)},
                         {"sd", Optional(r.sd)}, {"min", r.min}, {"q1", r.q1},
                         {"median", r.median}, {"q3", r.q3}, {"max", r.max}});
    }
  }
  return {{"numeric", numeric}, {"dates", dates}};
}

json CorrelationToJson(const CorrelationResult& result) {
  json per_site = json::object();
  for (size_t s = 0; s < result.per_site.size(); ++s) {
    per_site[result.dataset_ids[s]] = ValuesToJson(result.per_site[s]);
  }
  return {{"columns", result.columns},
          {"n", result.n},
          {"per_site", per_site},
          {"federated", ValuesToJson(result.pooled)}};
}

absl::Status RegisterFedStats(Registry& registry) {
  for (auto& [name, step] : std::vector<std::pair<std::string, LocalStep>>{
           {"moments", MomentsStep},
           {"histogram", HistogramStep},
           {"five_number", FiveNumberStep},
           {"crossproducts", CrossProductsStep},
           {"binned_count", BinnedCountStep}}) {
    if (absl::Status s = registry.AddStep(name, step); !s.ok()) return s;
  }

  Workflow tableone;
  tableone.op_kind = OpKind::kTableOne;
  tableone.validate = [](const json& p) {
    return FirstError(RequireKnownKeys(p, {"numeric_columns", "date_columns", "bins"}),
                      RequireStringList(p, "numeric_columns"),
                      RequireStringList(p, "date_columns"), RequirePositiveInt(p, "bins"));
  };
  tableone.run = [](RoundRunner& runner, const json& p) -> absl::StatusOr<json> {
    auto rows = FederatedTableOne(runner, StringsOr(p, "numeric_columns", TableOneNumericColumns()),
                                  StringsOr(p, "date_columns", TableOneDateColumns()),
                                  p.value("bins", kDefaultQuantileBins));
    if (!rows.ok()) return rows.status();
    return TableOneToJson(*rows);
  };

  Workflow boxplot;
  boxplot.op_kind = OpKind::kTableOne;
  boxplot.validate = [](const json& p) {
    return FirstError(RequireKnownKeys(p, {"columns", "per_site", "bins"}),
                      RequireStringList(p, "columns"), RequireBool(p, "per_site"),
                      RequirePositiveInt(p, "bins"));
  };
  boxplot.run = [](RoundRunner& runner, const json& p) -> absl::StatusOr<json> {
    auto result = FederatedBoxplot(runner, StringsOr(p, "columns", TableOneNumericColumns()),
                                   p.value("per_site", true), p.value("bins", kDefaultQuantileBins));
    if (!result.ok()) return result.status();
    return BoxplotToJson(*result);
  };

  Workflow correlation;
  correlation.op_kind = OpKind::kCorrelation;
  correlation.validate = [](const json& p) {
    return FirstError(RequireKnownKeys(p, {"columns"}), RequireStringList(p, "columns"));
  };
  correlation.run = [](RoundRunner& runner, const json& p) -> absl::StatusOr<json> {
    auto result = FederatedCorrelation(runner, StringsOr(p, "columns", TableOneNumericColumns()));
    if (!result.ok()) return result.status();
    return CorrelationToJson(*result);
  };

  Workflow scatter;
  scatter.op_kind = OpKind::kBinnedCount;
  scatter.validate = [](const json& p) {
    absl::Status s = FirstError(RequireKnownKeys(p, {"x", "y", "x_bins", "y_bins"}),
                                RequirePositiveInt(p, "x_bins"), RequirePositiveInt(p, "y_bins"));
    if (!s.ok()) return s;
    for (const char* key : {"x", "y"}) {
      if (p.contains(key) && !p.at(key).is_string()) {
        return absl::InvalidArgumentError(
            std::string("PayloadInvalid: '") + key + "' must be a column name");
      }
    }
    return absl::OkStatus();
  };
  scatter.run = [](RoundRunner& runner, const json& p) -> absl::StatusOr<json> {
    auto result = FederatedBinnedScatter(runner, p.value("x", std::string(col::kLesionVolume)),
                                         p.value("y", std::string(col::kEdss)),
                                         p.value("x_bins", 12), p.value("y_bins", 12));
    if (!result.ok()) return result.status();
    json per_site = json::object();
    for (size_t s = 0; s < result->per_site.size(); ++s) {
      per_site[result->dataset_ids[s]] = GridToJson(result->per_site[s]);
    }
    return json{{"per_site", per_site}, {"combined", GridToJson(result->combined)}};
  };

  for (auto& [mode, workflow] : std::vector<std::pair<std::string, Workflow>>{
           {"tableone", tableone},
           {"boxplot", boxplot},
           {"correlation", correlation},
           {"binned_scatter", scatter}}) {
    if (absl::Status s = registry.AddWorkflow(mode, workflow); !s.ok()) return s;
  }
  return absl::OkStatus();
}

}  // namespace fedmed
