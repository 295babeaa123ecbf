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

#include "fedmed/surv/steps.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "fedmed/cohort/csv.h"
#include "fedmed/cohort/schema.h"
#include "fedmed/pca/onehot.h"

namespace fedmed {
namespace {

using nlohmann::json;

absl::Status PayloadError(const json::exception& e) {
  return absl::InvalidArgumentError(absl::StrCat("PayloadInvalid: ", e.what()));
}

// Survival records with raw features followed by PC projections.
absl::StatusOr<std::vector<SurvivalRecord>> CoxRecords(const LocalContext& context) {
  std::vector<std::string> features;
  std::optional<PrincipalComponents> pca;
  try {
    features = context.broadcast.at("features").get<std::vector<std::string>>();
    if (context.broadcast.contains("pca")) {
      auto pc = ComponentsFromJson(context.broadcast.at("pca"));
      if (!pc.ok()) return pc.status();
      pca = *std::move(pc);
    }
  } catch (const json::exception& e) {
    return PayloadError(e);
  }
  auto records = DeriveSurvival(
      context.table, context.broadcast.value("event_threshold", kDefaultEventThreshold), features);
  if (!records.ok() || !pca) return records;
  std::vector<SurvivalRecord> out;
  for (SurvivalRecord& r : *records) {
    auto x = EncodeRow(pca->encoding, context.table, r.row);
    if (!x.ok()) return x.status();
    if (!x->has_value()) continue;
    auto z = ProjectRow(*pca, **x);
    if (!z.ok()) return z.status();
    r.x.insert(r.x.end(), z->begin(), z->end());
    out.push_back(std::move(r));
  }
  return out;
}

absl::StatusOr<std::vector<double>> BroadcastBeta(const LocalContext& context) {
  try {
    return context.broadcast.at("beta").get<std::vector<double>>();
  } catch (const json::exception& e) {
    return PayloadError(e);
  }
}

json MatrixRows(const Matrix& m) {
  json rows = json::array();
  for (size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

absl::StatusOr<CoxTerms> TermsFromPayload(const AggregatePayload& payload, size_t p) {
  CoxTerms t = ZeroCoxTerms(p);
  try {
    t.loglik = payload.stats.at("loglik").get<double>();
    t.gradient = payload.stats.at("gradient").get<std::vector<double>>();
    const auto rows = payload.stats.at("hessian").get<std::vector<std::vector<double>>>();
    t.events = payload.counts.at("events").get<int64_t>();
    if (t.gradient.size() != p || rows.size() != p) {
      return absl::InvalidArgumentError("PayloadInvalid: Cox terms have the wrong dimension");
    }
    for (size_t r = 0; r < p; ++r) {
      if (rows[r].size() != p) {
        return absl::InvalidArgumentError("PayloadInvalid: Cox Hessian is not square");
      }
      for (size_t c = 0; c < p; ++c) t.hessian(r, c) = rows[r][c];
    }
  } catch (const json::exception& e) {
    return PayloadError(e);
  }
  if (auto it = payload.supporting_counts.find("n"); it != payload.supporting_counts.end()) {
    t.n = it->second;
  }
  return t;
}

std::vector<std::string> CoxColumns(const CoxRequest& request) {
  std::vector<std::string> columns = SurvivalColumns();
  for (const std::string& f : request.features) columns.push_back(f);
  if (request.pca) {
    for (const std::string& c : request.pca->encoding.columns) columns.push_back(c);
  }
  std::vector<std::string> unique;
  for (const std::string& c : columns) {
    if (std::find(unique.begin(), unique.end(), c) == unique.end()) unique.push_back(c);
  }
  return unique;
}

json StepsToJson(const std::vector<StepPoint>& steps, const char* value_key) {
  json out = json::array();
  for (const StepPoint& s : steps) out.push_back({{"t", s.time}, {value_key, s.value}});
  return out;
}

}  // namespace

const std::vector<std::string>& DefaultCoxFeatures() {
  static const auto* const kFeatures = new std::vector<std::string>{
      std::string(col::kCensor),       std::string(col::kChange), std::string(col::kNineHolePeg),
      std::string(col::kTimedWalk),    std::string(col::kSdmt),   std::string(col::kMsfc),
      std::string(col::kRelapse),      std::string(col::kCda),    std::string(col::kLesionVolume)};
  return *kFeatures;
}

absl::StatusOr<AggregatePayload> CoxTermsStep(const LocalContext& context) {
  auto records = CoxRecords(context);
  if (!records.ok()) return records.status();
  auto beta = BroadcastBeta(context);
  if (!beta.ok()) return beta.status();
  auto terms = LocalCoxTerms(*records, *beta);
  if (!terms.ok()) return terms.status();
  AggregatePayload payload;
  payload.stats = {{"loglik", terms->loglik},
                   {"gradient", terms->gradient},
                   {"hessian", MatrixRows(terms->hessian)},
                   {"no_events", terms->events == 0}};
  payload.counts = {{"events", terms->events}};
  payload.supporting_counts["n"] = terms->n;
  return payload;
}

absl::StatusOr<AggregatePayload> CoxBaselineStep(const LocalContext& context) {
  auto records = CoxRecords(context);
  if (!records.ok()) return records.status();
  auto beta = BroadcastBeta(context);
  if (!beta.ok()) return beta.status();
  const int64_t width = context.broadcast.value("width", kDefaultIntervalWidthDays);
  if (width < 1) return absl::InvalidArgumentError("PayloadInvalid: 'width' must be >= 1");
  int64_t max_time = 0;
  for (const SurvivalRecord& r : *records) max_time = std::max(max_time, r.time);
  auto merged = LocalIntervalCounts(*records, width, IntervalsFor(max_time, width),
                                    context.policy.min_cell_count);
  if (!merged.ok()) return merged.status();
  std::vector<int64_t> grid = {0};
  for (const IntervalCounts& ic : *merged) grid.push_back(ic.t_hi);

  std::vector<double> mean(beta->size(), 0.0);
  for (const SurvivalRecord& r : *records) {
    for (size_t k = 0; k < mean.size() && k < r.x.size(); ++k) mean[k] += r.x[k];
  }
  if (!records->empty()) {
    for (double& m : mean) m /= static_cast<double>(records->size());
  }
  AggregatePayload payload;
  payload.stats = {{"hazard", StepsToJson(BreslowBaseline(*records, *beta, grid), "H")},
                   {"mean_x", mean}};
  payload.supporting_counts["n"] = static_cast<int64_t>(records->size());
  return payload;
}

absl::StatusOr<CoxModel> FederatedCox(RoundRunner& runner, const CoxRequest& request) {
  CoxModel model;
  model.features = request.features;
  json broadcast = {{"features", request.features},
                    {"event_threshold", request.event_threshold}};
  if (request.pca) {
    broadcast["pca"] = ComponentsToJson(*request.pca);
    for (size_t c = 0; c < request.pca->k(); ++c) {
      model.features.push_back(absl::StrCat("PC", c + 1));
    }
  }
  const size_t p = model.features.size();
  const std::vector<std::string> columns = CoxColumns(request);

  CoxEvaluator evaluate = [&](const std::vector<double>& beta) -> absl::StatusOr<CoxTerms> {
    json b = broadcast;
    b["beta"] = beta;
    auto round = runner.RunRound(OpKind::kCox, "cox_terms", columns, b);
    if (!round.ok()) return round.status();
    CoxTerms total = ZeroCoxTerms(p);
    for (const SitePayload& site : *round) {
      auto terms = TermsFromPayload(site.payload, p);
      if (!terms.ok()) return terms.status();
      if (absl::Status s = AddCoxTerms(total, *terms); !s.ok()) return s;
    }
    return total;
  };
  auto fit = MaximizePartialLikelihood(evaluate, p, request.options);
  if (!fit.ok()) return fit.status();
  model.fit = *std::move(fit);

  json b = broadcast;
  b["beta"] = model.fit.beta;
  b["width"] = request.interval_width;
  auto round = runner.RunRound(OpKind::kCox, "cox_baseline", columns, b);
  if (!round.ok()) return round.status();
  std::vector<long double> weighted(p, 0.0L);
  int64_t total = 0;
  for (const SitePayload& site : *round) {
    SiteBaseline base;
    base.dataset_id = site.dataset_id;
    try {
      base.mean_x = site.payload.stats.at("mean_x").get<std::vector<double>>();
      for (const auto& point : site.payload.stats.at("hazard")) {
        base.hazard.push_back({point.at("t").get<int64_t>(), point.at("H").get<double>()});
      }
    } catch (const json::exception& e) {
      return PayloadError(e);
    }
    if (base.mean_x.size() != p) {
      return absl::InvalidArgumentError("PayloadInvalid: baseline means have the wrong dimension");
    }
    auto it = site.payload.supporting_counts.find("n");
    base.n = it == site.payload.supporting_counts.end() ? 0 : it->second;
    total += base.n;
    for (size_t k = 0; k < p; ++k) weighted[k] += base.mean_x[k] * static_cast<long double>(base.n);
    model.baselines.push_back(std::move(base));
  }
  std::vector<double> means(p, 0.0);
  if (total > 0) {
    for (size_t k = 0; k < p; ++k) means[k] = static_cast<double>(weighted[k] / total);
  }
  model.normalized = NormalizeCoefficients(model.features, model.fit.beta, means);
  model.display_survival = DisplaySurvival(model.baselines, model.fit.beta);
  return model;
}

json CoxToJson(const CoxModel& model) {
  json normalized = json::array();
  json flagged = json::array();
  for (const NormalizedCoefficient& c : model.normalized) {
    normalized.push_back(c.reported);
    if (c.zero_mean) flagged.push_back(c.feature);
  }
  json baseline = json::object();
  for (const SiteBaseline& s : model.baselines) {
    baseline[s.dataset_id] = {{"n", s.n}, {"mean_x", s.mean_x}, {"H", StepsToJson(s.hazard, "H")}};
  }
  return {{"features", model.features},
          {"beta", model.fit.beta},
          {"beta_normalized", normalized},
          {"zero_mean_features", flagged},
          {"rounds", model.fit.rounds},
          {"iterations", model.fit.iterations},
          {"converged", model.fit.converged},
          {"loglik", model.fit.loglik},
          {"gradient_norm", model.fit.gradient_norm},
          {"warnings", model.fit.warnings},
          {"baseline", baseline},
          {"survival", StepsToJson(model.display_survival, "S")}};
}

std::string CoxCoefficientsCsv(const CoxModel& model) {
  std::string out = "feature,beta,mean,beta_normalized,zero_mean\n";
  for (const NormalizedCoefficient& c : model.normalized) {
    absl::StrAppend(&out,
                    absl::StrJoin({CsvEscape(c.feature), FormatNumber(c.beta), FormatNumber(c.mean),
                                   FormatNumber(c.reported),
                                   std::string(c.zero_mean ? "1" : "0")},
                                  ","),
                    "\n");
  }
  return out;
}

absl::Status RegisterFedSurv(Registry& registry) {
  for (auto& [name, step] : std::vector<std::pair<std::string, LocalStep>>{
           {"km_max_time", KmMaxTimeStep},
           {"km_boundaries", KmBoundariesStep},
           {"km_counts", KmCountsStep},
           {"cox_terms", CoxTermsStep},
           {"cox_baseline", CoxBaselineStep}}) {
    if (absl::Status s = registry.AddStep(name, step); !s.ok()) return s;
  }

  Workflow km;
  km.op_kind = OpKind::kKm;
  km.validate = [](const json& p) -> absl::Status {
    for (const absl::Status& s :
         {RequireKnownKeys(p, {"event_threshold", "interval_width_days"}),
          RequireNumber(p, "event_threshold"), RequirePositiveInt(p, "interval_width_days")}) {
      if (!s.ok()) return s;
    }
    return absl::OkStatus();
  };
  km.run = [](RoundRunner& runner, const json& p) -> absl::StatusOr<json> {
    auto curve = FederatedKaplanMeier(runner, p.value("event_threshold", kDefaultEventThreshold),
                                      p.value("interval_width_days", kDefaultIntervalWidthDays));
    if (!curve.ok()) return curve.status();
    return KmToJson(*curve);
  };

  Workflow cox;
  cox.op_kind = OpKind::kCox;
  cox.validate = [](const json& p) -> absl::Status {
    for (const absl::Status& s :
         {RequireKnownKeys(p, {"features", "event_threshold", "num_rounds", "tol",
                               "interval_width_days", "pca", "pca_columns", "pca_k"}),
          RequireStringList(p, "features"), RequireNumber(p, "event_threshold"),
          RequirePositiveInt(p, "num_rounds"), RequireNumber(p, "tol"),
          RequirePositiveInt(p, "interval_width_days"), RequireBool(p, "pca"),
          RequireStringList(p, "pca_columns"), RequirePositiveInt(p, "pca_k")}) {
      if (!s.ok()) return s;
    }
    if (p.contains("tol") && !(p.at("tol").get<double>() > 0.0)) {
      return absl::InvalidArgumentError("PayloadInvalid: 'tol' must be positive");
    }
    return absl::OkStatus();
  };
  cox.run = [](RoundRunner& runner, const json& p) -> absl::StatusOr<json> {
    CoxRequest request;
    if (p.contains("features")) request.features = p.at("features").get<std::vector<std::string>>();
    request.event_threshold = p.value("event_threshold", kDefaultEventThreshold);
    request.options.max_rounds = p.value("num_rounds", request.options.max_rounds);
    request.options.tol = p.value("tol", request.options.tol);
    request.interval_width = p.value("interval_width_days", kDefaultIntervalWidthDays);
    json pca_out;
    if (p.value("pca", false)) {
      const auto columns = p.contains("pca_columns")
                               ? p.at("pca_columns").get<std::vector<std::string>>()
                               : DefaultCategoricalColumns();
      auto pc = FederatedPca(runner, columns, p.value("pca_k", kDefaultComponents));
      if (!pc.ok()) return pc.status();
      request.pca = *std::move(pc);
    }
    auto model = FederatedCox(runner, request);
    if (!model.ok()) return model.status();
    return CoxToJson(*model);
  };

  for (auto& [mode, workflow] :
       std::vector<std::pair<std::string, Workflow>>{{"km", km}, {"cox", cox}}) {
    if (absl::Status s = registry.AddWorkflow(mode, workflow); !s.ok()) return s;
  }
  return absl::OkStatus();
}

}  // namespace fedmed
