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

#include "fedmed/synth/generator.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "fedmed/synth/random.h"

namespace fedmed {
namespace {

using nlohmann::json;

// Loading of each functional score on standardized EDSS.
struct FunctionalScore {
  const char* column;
  double loading;
  double lo;  // plausible range, clamped
  double hi;
  int decimals;
};

constexpr FunctionalScore kFunctionalScores[] = {
    {"SDMT", -0.45, 27.0, 87.0, 2},  {"CHG", 0.35, -0.48, 1.40, 2},
    {"MSFC", -0.50, -9.33, 6.26, 2}, {"T25FWT", 0.45, 2.0, 18.0, 2},
    {"9HPT", 0.40, 0.0, 57.0, 2},
};

constexpr int kFirstSymptomLagDays = 60;
constexpr int kTreatmentLagDays = 60;
constexpr int kVisitLagDays = 300;

double Round(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

Date ClampDate(int64_t days, const DateWindow& w) {
  return Date::FromDays(std::clamp(days, w.min.ToDays(), w.max.ToDays()));
}

absl::Status Invalid(std::string_view field, std::string_view why) {
  return absl::InvalidArgumentError(absl::StrCat("ConfigInvalid: ", std::string(field), " ", std::string(why)));
}

Marginal TargetFor(const FederationGenConfig& fed, const std::string& column) {
  if (auto it = fed.target_marginals.find(column); it != fed.target_marginals.end()) {
    return it->second;
  }
  return TableOneTargets().at(column);
}

double NoiseFor(const SiteGenConfig& site, const FederationGenConfig& fed,
                const std::string& column, double loading) {
  if (auto it = site.noise_scales.find(column); it != site.noise_scales.end()) {
    return it->second;
  }
  return TargetFor(fed, column).sd * std::sqrt(1.0 - loading * loading);
}

std::string DrawCategory(Rng& rng, const SiteGenConfig& site, const ColumnSpec& spec) {
  std::vector<double> weights(spec.categories.size(), 1.0);
  if (auto it = site.category_weights.find(spec.name); it != site.category_weights.end()) {
    weights = it->second;
  }
  return spec.categories[rng.Categorical(weights)];
}

}  // namespace

int64_t FederationGenConfig::total_subjects() const {
  int64_t n = 0;
  for (const auto& s : sites) n += s.n_subjects;
  return n;
}

const std::map<std::string, DateWindow>& DateVariableWindows() {
  static const auto* const kWindows = [] {
    auto d = [](const char* iso) { return *Date::Parse(iso); };
    return new std::map<std::string, DateWindow>{
        {"DTFSTSYM", {d("2022-01-02"), d("2023-12-31")}},
        {"DIAGDT", {d("2022-02-01"), d("2024-02-03")}},
        {"VISITDT", {d("2022-02-26"), d("2024-12-09")}},
        {"TRTSDTC", {d("2022-03-02"), d("2024-03-07")}},
    };
  }();
  return *kWindows;
}

const std::map<std::string, Marginal>& TableOneTargets() {
  static const auto* const kTargets = new std::map<std::string, Marginal>{
      {"SDMT", {55.56, 10.15}},  {"CHG", {0.39, 0.31}},
      {"EDSS", {3.51, 2.16}},    {"RELAPSE", {3.11, 1.82}},
      {"CNSR", {0.01, 0.11}},    {"MSFC", {-2.33, 2.02}},
      {"T25FWT", {8.91, 2.53}},  {"9HPT", {22.66, 9.77}},
      {"LESION_VOLUME", {2188.0, 2136.0}}, {"CDA", {0.0, 0.2}},
  };
  return *kTargets;
}

FederationGenConfig DefaultTwoSiteConfig() {
  FederationGenConfig fed;
  fed.target_marginals = TableOneTargets();
  fed.event_threshold = 2.0;
  fed.censoring_rate = 0.012;

  const std::map<std::string, std::vector<double>> shared_weights = {
      {"SEX", {0.70, 0.30}},
      {"ETHNIC", {0.08, 0.10, 0.10, 0.04, 0.68}},
      {"VOCSTAT", {0.55, 0.10, 0.10, 0.25}},
      {"EDUSTAT", {0.15, 0.45, 0.40}},
      {"PRSNTSYM", {0.15, 0.10, 0.25, 0.25, 0.25}},
  };

  SiteGenConfig low;
  low.site_id = "site-1";
  low.n_subjects = 693;
  low.lesion_volume_center = 700.0;
  low.lesion_edss_within_site_slope = -0.0003;
  low.edss_offset = 1.8;
  low.date_windows = DateVariableWindows();
  low.noise_scales = {{"LESION_VOLUME", 500.0}, {"EDSS", 0.3}};
  low.category_weights = shared_weights;
  low.category_weights["MSSUBTP"] = {0.05, 0.85, 0.10};

  SiteGenConfig high = low;
  high.site_id = "site-2";
  high.lesion_volume_center = 3676.0;
  high.edss_offset = 5.2;
  high.noise_scales = {{"LESION_VOLUME", 2200.0}, {"EDSS", 1.0}};
  high.category_weights["MSSUBTP"] = {0.15, 0.55, 0.30};

  fed.sites = {low, high};
  return WithSeed(std::move(fed), kDefaultSeed);
}

FederationGenConfig WithSeed(FederationGenConfig config, uint64_t seed) {
  for (size_t i = 0; i < config.sites.size(); ++i) {
    config.sites[i].seed = MixSeed(seed + i);
  }
  return config;
}

absl::Status ValidateConfig(const SiteGenConfig& site, const FederationGenConfig& fed) {
  const std::string p = absl::StrCat("site '", site.site_id, "'.");
  if (site.site_id.empty()) return Invalid("site_id", "must be non-empty");
  if (site.n_subjects < 1) {
    return Invalid(p + "n_subjects", absl::StrCat("must be >= 1, got ", site.n_subjects));
  }
  if (!(site.lesion_volume_center > 0.0)) {
    return Invalid(p + "lesion_volume_center", "must be positive");
  }
  if (!std::isfinite(site.lesion_edss_within_site_slope) ||
      site.lesion_edss_within_site_slope > 0.0) {
    return Invalid(p + "lesion_edss_within_site_slope", "must be finite and <= 0");
  }
  if (!std::isfinite(site.edss_offset)) return Invalid(p + "edss_offset", "must be finite");
  for (const auto& [name, scale] : site.noise_scales) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      return Invalid(p + "noise_scales." + name, "must be positive");
    }
  }
  const auto& overall = DateVariableWindows();
  for (const auto& [name, bounds] : overall) {
    auto it = site.date_windows.find(name);
    if (it == site.date_windows.end()) return Invalid(p + "date_windows." + name, "missing");
    const DateWindow& w = it->second;
    if (w.min > w.max || w.min < bounds.min || w.max > bounds.max) {
      return Invalid(p + "date_windows." + name,
                     absl::StrCat("must lie within [", bounds.min.ToString(), ", ",
                                  bounds.max.ToString(), "] with min <= max"));
    }
  }
  // Window ordering keeps DTFSTSYM <= DIAGDT <= {TRTSDTC, VISITDT} for every
  // row, including the anchor rows placed on the window endpoints.
  const auto& w = site.date_windows;
  for (auto end : {&DateWindow::min, &DateWindow::max}) {
    const Date diag = w.at("DIAGDT").*end;
    if (w.at("DTFSTSYM").*end > diag || w.at("TRTSDTC").*end < diag ||
        w.at("VISITDT").*end < diag) {
      return Invalid(p + "date_windows",
                     "must satisfy DTFSTSYM <= DIAGDT <= TRTSDTC, VISITDT at both ends");
    }
  }
  const Schema& schema = StandardSchema();
  for (const auto& [name, weights] : site.category_weights) {
    auto idx = schema.IndexOf(name);
    if (!idx || schema.column(*idx).kind != ColumnKind::kCategorical) {
      return Invalid(p + "category_weights." + name, "is not a categorical column");
    }
    if (weights.size() != schema.column(*idx).categories.size()) {
      return Invalid(p + "category_weights." + name, "has the wrong number of weights");
    }
    double total = 0.0;
    for (double x : weights) {
      if (!(x >= 0.0)) return Invalid(p + "category_weights." + name, "must be >= 0");
      total += x;
    }
    if (!(total > 0.0)) return Invalid(p + "category_weights." + name, "sum to zero");
  }
  (void)fed;
  return absl::OkStatus();
}

absl::Status ValidateConfig(const FederationGenConfig& fed) {
  if (fed.sites.empty()) return Invalid("sites", "must be non-empty");
  if (!(fed.censoring_rate >= 0.0 && fed.censoring_rate <= 1.0)) {
    return Invalid("censoring_rate", "must lie in [0, 1]");
  }
  if (!std::isfinite(fed.event_threshold)) return Invalid("event_threshold", "must be finite");
  for (const auto& [name, m] : fed.target_marginals) {
    if (!std::isfinite(m.mean) || !(m.sd > 0.0)) {
      return Invalid("target_marginals." + name, "needs finite mean and positive sd");
    }
  }
  std::set<std::string> ids;
  for (const auto& site : fed.sites) {
    if (absl::Status s = ValidateConfig(site, fed); !s.ok()) return s;
    if (!ids.insert(site.site_id).second) {
      return Invalid("sites", absl::StrCat("duplicate site_id '", site.site_id, "'"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<CohortTable> GenerateSite(const SiteGenConfig& site,
                                         const FederationGenConfig& fed) {
  if (absl::Status s = ValidateConfig(site, fed); !s.ok()) return s;
  const Schema& schema = StandardSchema();
  Rng rng(site.seed);

  const Marginal edss_target = TargetFor(fed, "EDSS");
  const double lesion_sd = site.noise_scales.count("LESION_VOLUME")
                               ? site.noise_scales.at("LESION_VOLUME")
                               : 0.5 * site.lesion_volume_center;
  const double edss_noise = site.noise_scales.count("EDSS") ? site.noise_scales.at("EDSS")
                                                            : 1.0;
  const double age_sd = site.noise_scales.count("BAGE") ? site.noise_scales.at("BAGE") : 10.0;
  const auto& win = site.date_windows;

  auto index = [&](std::string_view name) { return *schema.IndexOf(name); };

  std::vector<Row> rows;
  rows.reserve(static_cast<size_t>(site.n_subjects));
  for (int64_t i = 0; i < site.n_subjects; ++i) {
    Row row(schema.size());
    row[index(col::kPid)] = absl::StrFormat("%s-P%05d", site.site_id, i + 1);

    for (const ColumnSpec& spec : schema.columns()) {
      if (spec.kind == ColumnKind::kCategorical) {
        row[index(spec.name)] = DrawCategory(rng, site, spec);
      }
    }

    // Dates. The first two subjects sit on the window endpoints so the
    // site's date ranges are exactly the configured windows.
    Date diag, first, treat, visit;
    if (i == 0 || i == 1) {
      auto end = i == 0 ? &DateWindow::min : &DateWindow::max;
      diag = win.at("DIAGDT").*end;
      first = win.at("DTFSTSYM").*end;
      treat = win.at("TRTSDTC").*end;
      visit = win.at("VISITDT").*end;
    } else {
      const int64_t d = rng.UniformInt(win.at("DIAGDT").min.ToDays(),
                                       win.at("DIAGDT").max.ToDays());
      diag = Date::FromDays(d);
      first = ClampDate(d - rng.UniformInt(0, kFirstSymptomLagDays), win.at("DTFSTSYM"));
      treat = ClampDate(d + rng.UniformInt(0, kTreatmentLagDays), win.at("TRTSDTC"));
      visit = ClampDate(d + rng.UniformInt(0, kVisitLagDays), win.at("VISITDT"));
    }
    row[index(col::kDiagnosisDate)] = diag;
    row[index(col::kFirstSymptomDate)] = first;
    row[index(col::kTreatmentStart)] = treat;
    row[index(col::kVisitDate)] = visit;
    const int64_t days_since_diag = DaysBetween(visit, diag);

    const double lesion = std::max(
        1.0, std::round(rng.LogNormalByMoments(site.lesion_volume_center, lesion_sd)));
    const double edss_raw = site.edss_offset +
                            site.lesion_edss_within_site_slope *
                                (lesion - site.lesion_volume_center) +
                            edss_noise * rng.Normal();
    const double edss = Round(std::max(0.0, edss_raw), 2);
    row[index(col::kLesionVolume)] = lesion;
    row[index(col::kEdss)] = edss;
    const double z = (edss - edss_target.mean) / edss_target.sd;

    double change = 0.0;
    for (const FunctionalScore& f : kFunctionalScores) {
      const Marginal m = TargetFor(fed, f.column);
      const double v = m.mean + f.loading * m.sd * z +
                       NoiseFor(site, fed, f.column, f.loading) * rng.Normal();
      const double clamped = Round(std::clamp(v, f.lo, f.hi), f.decimals);
      row[index(f.column)] = clamped;
      if (std::string_view(f.column) == col::kChange) change = clamped;
    }

    const Marginal relapse = TargetFor(fed, "RELAPSE");
    row[index(col::kRelapse)] = static_cast<double>(std::min<int64_t>(
        9, rng.Poisson(std::max(0.2, relapse.mean + 0.25 * relapse.sd * z))));
    row[index(col::kCensor)] = rng.Bernoulli(fed.censoring_rate) ? 1.0 : 0.0;
    row[index(col::kCda)] =
        rng.Bernoulli(std::clamp(0.03 + 0.015 * z, 0.005, 0.2)) ? 1.0 : 0.0;
    row[index(col::kBaselineAge)] =
        std::clamp(std::round(38.0 + age_sd * rng.Normal()), 18.0, 70.0);
    row[index(col::kFollowUp)] =
        static_cast<double>(std::max<int64_t>(0, DaysBetween(visit, treat)));
    row[index(col::kBase)] =
        Round(std::max(0.0, edss - change * static_cast<double>(days_since_diag) / 365.25), 2);

    rows.push_back(std::move(row));
  }
  return CohortTable::Create(schema, std::move(rows), site.site_id);
}

absl::StatusOr<std::vector<CohortTable>> GenerateFederation(
    const FederationGenConfig& fed) {
  if (absl::Status s = ValidateConfig(fed); !s.ok()) return s;
  std::vector<CohortTable> tables;
  for (const SiteGenConfig& site : fed.sites) {
    auto t = GenerateSite(site, fed);
    if (!t.ok()) return t.status();
    tables.push_back(*std::move(t));
  }
  return tables;
}

json ConfigToJson(const FederationGenConfig& fed) {
  json sites = json::array();
  for (const SiteGenConfig& s : fed.sites) {
    json windows = json::object();
    for (const auto& [name, w] : s.date_windows) {
      windows[name] = {w.min.ToString(), w.max.ToString()};
    }
    sites.push_back({{"site_id", s.site_id},
                     {"n_subjects", s.n_subjects},
                     {"lesion_volume_center", s.lesion_volume_center},
                     {"lesion_edss_within_site_slope", s.lesion_edss_within_site_slope},
                     {"edss_offset", s.edss_offset},
                     {"date_windows", windows},
                     {"noise_scales", s.noise_scales},
                     {"category_weights", s.category_weights},
                     {"seed", s.seed}});
  }
  json targets = json::object();
  for (const auto& [name, m] : fed.target_marginals) {
    targets[name] = {{"mean", m.mean}, {"sd", m.sd}};
  }
  return {{"sites", sites},
          {"target_marginals", targets},
          {"event_threshold", fed.event_threshold},
          {"censoring_rate", fed.censoring_rate}};
}

absl::StatusOr<FederationGenConfig> ConfigFromJson(const json& j) {
  FederationGenConfig fed;
  try {
    fed.event_threshold = j.value("event_threshold", 2.0);
    fed.censoring_rate = j.value("censoring_rate", 0.012);
    if (j.contains("target_marginals")) {
      for (const auto& [name, m] : j.at("target_marginals").items()) {
        fed.target_marginals[name] = {m.at("mean").get<double>(), m.at("sd").get<double>()};
      }
    } else {
      fed.target_marginals = TableOneTargets();
    }
    if (!j.contains("sites") || !j.at("sites").is_array()) {
      return Invalid("sites", "must be an array");
    }
    for (const json& s : j.at("sites")) {
      SiteGenConfig site;
      site.site_id = s.at("site_id").get<std::string>();
      site.n_subjects = s.at("n_subjects").get<int64_t>();
      site.lesion_volume_center = s.at("lesion_volume_center").get<double>();
      site.lesion_edss_within_site_slope = s.at("lesion_edss_within_site_slope").get<double>();
      site.edss_offset = s.at("edss_offset").get<double>();
      if (s.contains("date_windows")) {
        for (const auto& [name, w] : s.at("date_windows").items()) {
          auto lo = Date::Parse(w.at(0).get<std::string>());
          auto hi = Date::Parse(w.at(1).get<std::string>());
          if (!lo.ok() || !hi.ok()) return Invalid("date_windows." + name, "bad date");
          site.date_windows[name] = {*lo, *hi};
        }
      } else {
        site.date_windows = DateVariableWindows();
      }
      if (s.contains("noise_scales")) {
        site.noise_scales = s.at("noise_scales").get<std::map<std::string, double>>();
      }
      if (s.contains("category_weights")) {
        site.category_weights =
            s.at("category_weights").get<std::map<std::string, std::vector<double>>>();
      }
      site.seed = s.value("seed", uint64_t{0});
      fed.sites.push_back(std::move(site));
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("ConfigInvalid: ", e.what()));
  }
  return fed;
}

}  // namespace fedmed
