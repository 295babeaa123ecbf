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

// Acceptance suite: one PASS/FAIL line per criterion. Every tolerance used
// below is pinned here.
//
//   fedmed_acceptance                 run all criteria
//   fedmed_acceptance --criterion N   run criterion N only

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "fedmed/cli/cli.h"
#include "fedmed/cohort/csv.h"
#include "fedmed/cohort/omop.h"
#include "fedmed/cohort/schema.h"
#include "fedmed/federation.h"
#include "fedmed/pca/components.h"
#include "fedmed/pca/jacobi.h"
#include "fedmed/surv/baseline.h"
#include "fedmed/surv/cox.h"
#include "fedmed/surv/steps.h"
#include "fedmed/surv/survival.h"
#include "fedmed/synth/generator.h"
#include "fedmed/synth/random.h"
#include "json.hpp"
#include "tests/oracle/pooled.h"
#include "tests/testing/fixtures.h"

namespace fedmed {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Criterion 1.
constexpr double kSimpsonSiteMax = -0.2;
constexpr double kSimpsonFederatedMin = 0.2;
constexpr double kSimpsonSeconds = 5.0;
// Criterion 2.
constexpr double kMeanRelTol = 0.10;
constexpr double kBinaryAbsTol = 0.05;
constexpr int64_t kTotalSubjects = 1386;
// Criterion 3.
constexpr int kPartitions = 20;
constexpr int64_t kPartitionRows = 500;
constexpr double kStatsRelTol = 1e-10;
constexpr int kQuantileBins = 512;
// Criterion 4.
constexpr double kKmAbsTol = 1e-12;
// Criterion 5.
constexpr double kClosedFormTol = 1e-8;
constexpr double kFiniteDiffRelTol = 1e-5;
constexpr double kFiniteDiffStep = 1e-5;
constexpr int kFiniteDiffPoints = 10;
constexpr double kCoxOracleTol = 1e-6;
constexpr int kCoxMaxRounds = 30;
constexpr double kCoxSeconds = 30.0;
// Criterion 6.
constexpr int kSurvivalModels = 10;
constexpr int kSurvivalProfiles = 20;
constexpr double kSquaringTol = 1e-12;
// Criterion 7.
constexpr double kCovarianceTol = 1e-12;
constexpr double kEigenResidualRel = 1e-8;
constexpr double kOrthonormalTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kClosedForm2x2Tol = 1e-12;
constexpr size_t kReportComponents = 4;
// Criterion 9.
constexpr int64_t kOmopPersonRows = 2;
constexpr int64_t kOmopObservationRows = 14;
constexpr int64_t kOmopMeasurementRows = 16;
// Criterion 10.
constexpr double kSuiteSeconds = 120.0;

const Clock::time_point kSuiteStart = Clock::now();

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome Fail(const std::string& why) { return {false, why}; }

bool RelClose(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

std::vector<CohortTable> DefaultTables() {
  return *GenerateFederation(WithSeed(DefaultTwoSiteConfig(), kDefaultSeed));
}

int Cli(const std::vector<std::string>& args, std::string* output = nullptr) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(args, out, err);
  if (output != nullptr) *output = out.str() + err.str();
  return code;
}

// ------------------------------------------------------------------ 1

Outcome Simpson() {
  const auto start = Clock::now();
  auto result = testing::RunJob(DefaultTables(), DefaultPolicy(), "correlation",
                                {{"columns", {"LESION_VOLUME", "EDSS"}}});
  if (!result.ok()) return Fail(std::string(result.status().message()));
  const double elapsed = Seconds(start);
  bool pass = elapsed < kSimpsonSeconds;
  std::vector<std::string> sites;
  for (const auto& [site, m] : result->at("per_site").items()) {
    const double r = m[0][1].get<double>();
    pass = pass && r < kSimpsonSiteMax;
    sites.push_back(absl::StrFormat("%s %.3f", site, r));
  }
  const double fed = result->at("federated")[0][1].get<double>();
  pass = pass && fed > kSimpsonFederatedMin && sites.size() == 2;
  return {pass, absl::StrFormat("r(LESION_VOLUME, EDSS): %s; federated %.3f; %.2f s",
                                absl::StrJoin(sites, ", "), fed, elapsed)};
}

// ------------------------------------------------------------------ 2

Outcome TableOneCalibration() {
  // Calibration targets: variable -> mean, and date column -> [min, max].
  const std::vector<std::pair<std::string, double>> kTargetMeans = {
      {"SDMT", 55.56}, {"CHG", 0.39},     {"EDSS", 3.51},   {"RELAPSE", 3.11},
      {"CNSR", 0.01},  {"MSFC", -2.33},   {"T25FWT", 8.91}, {"9HPT", 22.66},
      {"LESION_VOLUME", 2188.0},          {"CDA", 0.0}};
  const std::map<std::string, std::pair<std::string, std::string>> kTargetDates = {
      {"DTFSTSYM", {"2022-01-02", "2023-12-31"}},
      {"DIAGDT", {"2022-02-01", "2024-02-03"}},
      {"VISITDT", {"2022-02-26", "2024-12-09"}},
      {"TRTSDTC", {"2022-03-02", "2024-03-07"}}};

  auto result = testing::RunJob(DefaultTables(), DefaultPolicy(), "tableone");
  if (!result.ok()) return Fail(std::string(result.status().message()));
  std::map<std::string, json> numeric;
  for (const json& row : result->at("numeric")) numeric[row.at("variable")] = row;
  std::vector<std::string> misses;
  double worst = 0.0;
  for (const auto& [name, target] : kTargetMeans) {
    if (!numeric.count(name)) {
      misses.push_back(name + " missing");
      continue;
    }
    const json& row = numeric[name];
    const double mean = row.at("mean").get<double>();
    const bool binary = name == "CNSR" || name == "CDA";
    const double err = std::fabs(mean - target);
    const bool ok = binary ? err <= kBinaryAbsTol : err <= kMeanRelTol * std::fabs(target);
    if (!binary) worst = std::max(worst, err / std::fabs(target));
    if (!ok) misses.push_back(absl::StrFormat("%s mean %.4g vs %.4g", name, mean, target));
    if (row.at("n").get<int64_t>() != kTotalSubjects) {
      misses.push_back(absl::StrCat(name, " n ", row.at("n").dump()));
    }
  }
  for (const json& row : result->at("dates")) {
    const std::string name = row.at("variable");
    auto it = kTargetDates.find(name);
    if (it == kTargetDates.end()) continue;
    if (row.at("min") != it->second.first || row.at("max") != it->second.second) {
      misses.push_back(absl::StrCat(name, " window ", row.at("min").dump(), "..",
                                    row.at("max").dump()));
    }
    if (row.at("n").get<int64_t>() != kTotalSubjects) misses.push_back(name + " n");
  }
  if (result->at("dates").size() != kTargetDates.size()) misses.push_back("date rows");
  if (!misses.empty()) return Fail(absl::StrJoin(misses, "; "));
  return {true, absl::StrFormat("10 means in tolerance (worst relative error %.3f), n = %d, "
                                "4 date windows exact",
                                worst, kTotalSubjects)};
}

// ------------------------------------------------------------------ 3

Outcome StatisticsOracle() {
  const CohortTable table = testing::GeneratedTable(kPartitionRows, 7001);
  const std::vector<std::string>& columns = TableOneNumericColumns();
  double worst_rel = 0.0;
  double worst_quantile = 0.0;  // in units of the bin width
  std::vector<std::string> misses;
  for (int i = 0; i < kPartitions; ++i) {
    const int sites = 1 + i % 5;
    const auto parts = testing::Partition(table, sites, 100 + i);
    auto t1 = testing::RunJob(parts, testing::OpenPolicy(), "tableone",
                              {{"numeric_columns", columns}, {"bins", kQuantileBins}});
    auto corr = testing::RunJob(parts, testing::OpenPolicy(), "correlation",
                                {{"columns", columns}});
    if (!t1.ok()) return Fail(std::string(t1.status().message()));
    if (!corr.ok()) return Fail(std::string(corr.status().message()));
    for (const json& row : t1->at("numeric")) {
      const std::string name = row.at("variable");
      const oracle::Summary want = oracle::Summarize(oracle::Values(table, name));
      auto rel = [&](const char* key, double expected) {
        const double got = row.at(key).get<double>();
        const double e = std::fabs(got - expected) /
                         std::max({std::fabs(got), std::fabs(expected), 1e-300});
        worst_rel = std::max(worst_rel, e);
        if (!RelClose(got, expected, kStatsRelTol)) {
          misses.push_back(absl::StrFormat("partition %d %s %s %.17g vs %.17g", i, name, key,
                                           got, expected));
        }
      };
      rel("mean", want.mean);
      rel("sd", want.sd);
      rel("min", want.min);
      rel("max", want.max);
      const double width = (want.max - want.min) / kQuantileBins;
      for (const auto& [key, expected] :
           std::vector<std::pair<const char*, double>>{
               {"q1", want.q1}, {"median", want.median}, {"q3", want.q3}}) {
        const double err = std::fabs(row.at(key).get<double>() - expected);
        if (width > 0) worst_quantile = std::max(worst_quantile, err / width);
        if (err > width) {
          misses.push_back(absl::StrFormat("partition %d %s %s off by %.3g > %.3g", i, name,
                                           key, err, width));
        }
      }
      if (row.at("n").get<int64_t>() != want.n) misses.push_back(name + " n");
    }
    const json& fed = corr->at("federated");
    for (size_t a = 0; a < columns.size(); ++a) {
      for (size_t b = 0; b < columns.size(); ++b) {
        const auto want = oracle::PearsonColumns(table, columns[a], columns[b], columns);
        const json& got = fed[a][b];
        if (!want || got.is_null()) {
          if (want.has_value() != !got.is_null()) {
            misses.push_back(absl::StrFormat("partition %d r(%s,%s) definedness", i,
                                             columns[a], columns[b]));
          }
          continue;
        }
        const double g = got.get<double>();
        worst_rel = std::max(worst_rel, std::fabs(g - *want) /
                                            std::max({std::fabs(g), std::fabs(*want), 1e-300}));
        if (!RelClose(g, *want, kStatsRelTol)) {
          misses.push_back(absl::StrFormat("partition %d r(%s,%s) %.17g vs %.17g", i,
                                           columns[a], columns[b], g, *want));
        }
      }
    }
  }
  if (!misses.empty()) {
    return Fail(absl::StrCat(misses.size(), " mismatches, first: ", misses.front()));
  }
  return {true, absl::StrFormat("%d partitions; worst relative error %.2e; worst quartile "
                                "error %.3f bin widths",
                                kPartitions, worst_rel, worst_quantile)};
}

// ------------------------------------------------------------------ 4

CohortTable WithColumn(const CohortTable& table, const std::string& column, double value) {
  const size_t idx = *table.schema().IndexOf(column);
  std::vector<Row> rows = table.rows();
  for (Row& r : rows) r[idx] = value;
  return *CohortTable::Create(table.schema(), std::move(rows), table.site_id());
}

Outcome KmOracle() {
  const CohortTable base = testing::GeneratedTable(kPartitionRows, 7002);
  // The last two partitions are the zero-event and all-event cases.
  const CohortTable all_event = WithColumn(base, "CNSR", 0.0);
  double worst = 0.0;
  int intervals = 0;
  std::vector<std::string> misses;
  for (int i = 0; i < kPartitions; ++i) {
    double threshold = kDefaultEventThreshold;
    const CohortTable* table = &base;
    if (i == kPartitions - 2) threshold = 1e9;
    if (i == kPartitions - 1) {
      threshold = -1.0;
      table = &all_event;
    }
    AssetPolicy policy = testing::OpenPolicy();
    policy.min_cell_count = i % 2 == 0 ? 1 : 5;
    policy.min_cohort_size = policy.min_cell_count;
    const auto parts = testing::Partition(*table, 1 + i % 5, 200 + i);
    auto km = testing::RunJob(parts, policy, "km",
                              {{"event_threshold", threshold}, {"interval_width_days", 30}});
    if (!km.ok()) return Fail(absl::StrCat("partition ", i, ": ", km.status().message()));

    auto pooled = oracle::Pool(parts);
    const auto subjects = oracle::Subjects(*pooled, threshold, {});
    std::vector<int64_t> grid;
    for (const json& iv : km->at("intervals")) {
      if (grid.empty()) grid.push_back(iv.at("t_lo").get<int64_t>());
      if (iv.at("t_lo").get<int64_t>() != grid.back()) misses.push_back("grid not contiguous");
      grid.push_back(iv.at("t_hi").get<int64_t>());
    }
    if (grid.empty() || grid.front() != 0) {
      misses.push_back(absl::StrCat("partition ", i, ": grid does not start at 0"));
      continue;
    }
    for (const auto& s : subjects) {
      if (s.time >= grid.back()) misses.push_back("subject beyond grid");
    }
    const auto want = oracle::KaplanMeier(subjects, grid);
    int64_t events = 0;
    for (size_t j = 0; j < want.size(); ++j) {
      const json& got = km->at("intervals")[j];
      events += want[j].d;
      if (got.at("d").get<int64_t>() != want[j].d || got.at("n").get<int64_t>() != want[j].n) {
        misses.push_back(absl::StrFormat("partition %d interval %d counts", i, j));
      }
      const double err = std::fabs(got.at("S").get<double>() - want[j].s);
      worst = std::max(worst, err);
      if (err > kKmAbsTol) misses.push_back(absl::StrFormat("partition %d interval %d S", i, j));
    }
    intervals += static_cast<int>(want.size());
    if (i == kPartitions - 2 && events != 0) misses.push_back("zero-event case has events");
    if (i == kPartitions - 1 && events != static_cast<int64_t>(subjects.size())) {
      misses.push_back("all-event case has censorings");
    }
    if (i == kPartitions - 1 && want.back().s != 0.0) misses.push_back("all-event S not 0");
  }
  if (!misses.empty()) {
    return Fail(absl::StrCat(misses.size(), " mismatches, first: ", misses.front()));
  }
  return {true, absl::StrFormat("%d partitions, %d intervals, max |S - S_oracle| = %.1e "
                                "(zero-event and all-event cases included)",
                                kPartitions, intervals, worst)};
}

// ------------------------------------------------------------------ 5

Outcome CoxCorrectness() {
  const auto start = Clock::now();
  std::vector<std::string> parts;
  bool pass = true;

  // (a) three records; stationary point of b - ln(2e^b + 1) - ln(1 + e^b).
  const CohortTable three = testing::TableFromCells(
      {testing::SurvivalRow(1, 3.0, 0.0, {{"RELAPSE", 1.0}}),
       testing::SurvivalRow(2, 3.0, 0.0, {{"RELAPSE", 0.0}}),
       testing::SurvivalRow(3, 1.0, 0.0, {{"RELAPSE", 1.0}})});
  auto closed = testing::RunJob({three}, testing::OpenPolicy(), "cox",
                                {{"features", {"RELAPSE"}}, {"interval_width_days", 1}});
  if (!closed.ok()) return Fail(absl::StrCat("(a) ", closed.status().message()));
  const double beta_a = closed->at("beta")[0].get<double>();
  const double err_a = std::fabs(beta_a + 0.5 * std::log(2.0));
  pass = pass && err_a <= kClosedFormTol;
  parts.push_back(absl::StrFormat("(a) beta %.10f, error %.1e", beta_a, err_a));

  // (b) derivatives against central differences in per-SD coordinates
  // u_k = beta_k * sd_k, where d/du_k = (1 / sd_k) d/dbeta_k.
  const std::vector<CohortTable> tables = DefaultTables();
  const auto records = *DeriveSurvival(tables[0], kDefaultEventThreshold, DefaultCoxFeatures());
  const size_t p = DefaultCoxFeatures().size();
  std::vector<double> sd(p);
  for (size_t k = 0; k < p; ++k) {
    std::vector<double> v;
    for (const auto& r : records) v.push_back(r.x[k]);
    sd[k] = oracle::Summarize(v).sd;
  }
  Rng rng(MixSeed(5005));
  double worst_g = 0.0;
  double worst_h = 0.0;
  for (int point = 0; point < kFiniteDiffPoints; ++point) {
    std::vector<double> beta(p);
    for (size_t k = 0; k < p; ++k) beta[k] = rng.Normal(0.0, 0.3) / sd[k];
    const CoxTerms at = *LocalCoxTerms(records, beta);
    std::vector<double> g(p), fd(p);
    std::vector<std::vector<double>> fdh(p, std::vector<double>(p));
    for (size_t k = 0; k < p; ++k) {
      std::vector<double> up = beta, down = beta;
      up[k] += kFiniteDiffStep / sd[k];
      down[k] -= kFiniteDiffStep / sd[k];
      const CoxTerms tu = *LocalCoxTerms(records, up);
      const CoxTerms td = *LocalCoxTerms(records, down);
      g[k] = at.gradient[k] / sd[k];
      fd[k] = (tu.loglik - td.loglik) / (2 * kFiniteDiffStep);
      for (size_t a = 0; a < p; ++a) {
        fdh[a][k] = (tu.gradient[a] - td.gradient[a]) / sd[a] / (2 * kFiniteDiffStep);
      }
    }
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < p; ++k) {
      num = std::max(num, std::fabs(g[k] - fd[k]));
      den = std::max(den, std::fabs(g[k]));
    }
    worst_g = std::max(worst_g, num / den);
    for (size_t k = 0; k < p; ++k) {
      double cn = 0.0, cd = 0.0;
      for (size_t a = 0; a < p; ++a) {
        const double h = at.hessian(a, k) / (sd[a] * sd[k]);
        cn = std::max(cn, std::fabs(h - fdh[a][k]));
        cd = std::max(cd, std::fabs(h));
      }
      worst_h = std::max(worst_h, cn / cd);
    }
  }
  pass = pass && worst_g <= kFiniteDiffRelTol && worst_h <= kFiniteDiffRelTol;
  parts.push_back(absl::StrFormat("(b) gradient %.1e, Hessian columns %.1e", worst_g, worst_h));

  // (c) default federation against the centralized stratified fit.
  auto fed = testing::RunJob(tables, DefaultPolicy(), "cox", {{"num_rounds", kCoxMaxRounds}});
  if (!fed.ok()) {
    return Fail(absl::StrCat(absl::StrJoin(parts, "; "), "; (c) ", fed.status().message()));
  }
  auto pooled = oracle::Pool(tables);
  const auto subjects = oracle::Subjects(*pooled, kDefaultEventThreshold, DefaultCoxFeatures());
  const oracle::CoxResult want = oracle::CentralizedStratifiedCox(subjects, p);
  const auto beta = fed->at("beta").get<std::vector<double>>();
  double diff = 0.0;
  for (size_t k = 0; k < p; ++k) diff = std::max(diff, std::fabs(beta[k] - want.beta[k]));
  const int rounds = fed->at("rounds").get<int>();
  const bool converged = fed->at("converged").get<bool>();
  const double elapsed = Seconds(start);
  pass = pass && want.converged && converged && diff <= kCoxOracleTol &&
         rounds <= kCoxMaxRounds && elapsed < kCoxSeconds;
  size_t largest = 0;
  for (size_t k = 1; k < p; ++k) {
    if (std::fabs(beta[k]) > std::fabs(beta[largest])) largest = k;
  }
  parts.push_back(absl::StrFormat("(c) |beta - oracle|_inf %.1e, %d rounds%s, largest "
                                  "coefficient %s %.2f; %.2f s",
                                  diff, rounds, converged ? "" : " (not converged)",
                                  DefaultCoxFeatures()[largest], beta[largest], elapsed));
  return {pass, absl::StrJoin(parts, "; ")};
}

// ------------------------------------------------------------------ 6

Outcome SurvivalAlgebra() {
  const std::vector<std::string> features = {"SDMT", "T25FWT", "RELAPSE"};
  Rng rng(MixSeed(6006));
  int curves = 0;
  std::vector<std::string> misses;
  double worst_sq = 0.0;
  for (int m = 0; m < kSurvivalModels; ++m) {
    const CohortTable table = testing::GeneratedTable(300, 8000 + m);
    const auto parts = testing::Partition(table, 2 + m % 3, 300 + m);
    auto fit = testing::RunJob(parts, testing::OpenPolicy(), "cox", {{"features", features}});
    if (!fit.ok()) return Fail(absl::StrCat("model ", m, ": ", fit.status().message()));
    const auto beta = fit->at("beta").get<std::vector<double>>();
    for (const auto& [site, base] : fit->at("baseline").items()) {
      std::vector<StepPoint> h0;
      for (const json& pt : base.at("H")) {
        h0.push_back({pt.at("t").get<int64_t>(), pt.at("H").get<double>()});
      }
      if (h0.empty() || h0.front().time != 0 || h0.front().value != 0.0) {
        misses.push_back(absl::StrCat("model ", m, " site ", site, ": H0(0) != 0"));
      }
      for (size_t j = 1; j < h0.size(); ++j) {
        if (h0[j].value < h0[j - 1].value) misses.push_back("H0 decreasing");
      }
      for (int q = 0; q < kSurvivalProfiles; ++q) {
        std::vector<double> x = {rng.Normal(55, 10), rng.Normal(9, 2.5), rng.Normal(3, 1.8)};
        const std::vector<StepPoint> s = SurvivalCurve(h0, beta, x);
        ++curves;
        if (SurvivalFromHazard(EvaluateStep(h0, 0), beta, x) != 1.0) misses.push_back("S(0) != 1");
        for (size_t j = 0; j < s.size(); ++j) {
          if (!(s[j].value > 0.0 && s[j].value <= 1.0)) misses.push_back("S outside (0, 1]");
          if (j > 0 && s[j].value > s[j - 1].value) misses.push_back("S increasing");
        }
        // Shift one coordinate so that exp(beta . x) doubles.
        size_t k = 0;
        for (size_t c = 1; c < beta.size(); ++c) {
          if (std::fabs(beta[c]) > std::fabs(beta[k])) k = c;
        }
        std::vector<double> doubled = x;
        doubled[k] += std::log(2.0) / beta[k];
        for (const StepPoint& pt : h0) {
          const double s1 = SurvivalFromHazard(pt.value, beta, x);
          const double s2 = SurvivalFromHazard(pt.value, beta, doubled);
          const double err = std::fabs(s2 - s1 * s1);
          worst_sq = std::max(worst_sq, err);
          if (err > kSquaringTol) misses.push_back("squaring identity");
          long double eta = 0.0L;
          for (size_t c = 0; c < beta.size(); ++c) eta += static_cast<long double>(beta[c]) * x[c];
          if (std::fabs(s1 - static_cast<double>(std::exp(-pt.value * std::exp(eta)))) > 1e-15) {
            misses.push_back("S differs from exp(-H0 exp(beta x))");
          }
        }
      }
    }
  }
  if (!misses.empty()) {
    return Fail(absl::StrCat(misses.size(), " violations, first: ", misses.front()));
  }
  return {true, absl::StrFormat("%d fitted models, %d curves; max |S(2r) - S(r)^2| = %.1e",
                                kSurvivalModels, curves, worst_sq)};
}

// ------------------------------------------------------------------ 7

Outcome PcaChecks() {
  std::vector<std::string> misses;
  double worst_cov = 0.0, worst_res = 0.0, worst_orth = 0.0, worst_trace = 0.0;
  const std::vector<std::string>& columns = DefaultCategoricalColumns();

  std::vector<std::vector<CohortTable>> federations = {DefaultTables()};
  const CohortTable table = testing::GeneratedTable(kPartitionRows, 7007);
  for (int i = 0; i < 5; ++i) federations.push_back(testing::Partition(table, 1 + i, 400 + i));

  size_t p = 0;
  for (const auto& tables : federations) {
    auto fed = BuildFederation(tables, DefaultPolicy());
    if (!fed.ok()) {
      fed = BuildFederation(tables, testing::OpenPolicy());
      if (!fed.ok()) return Fail(std::string(fed.status().message()));
    }
    auto session = fed->orchestrator->OpenSession(fed->compute_spec_id);
    auto encoding = FederatedCategoryDiscovery(**session, columns);
    if (!encoding.ok()) return Fail(std::string(encoding.status().message()));
    auto est = FederatedCovariance(**session, *encoding);
    if (!est.ok()) return Fail(std::string(est.status().message()));
    auto pooled = oracle::Pool(tables);
    const oracle::Pca want = oracle::PooledPca(pooled->table, columns);
    p = want.features.size();
    if (encoding->FeatureNames() != want.features) {
      misses.push_back("feature lists differ");
      continue;
    }
    for (size_t a = 0; a < p; ++a) {
      for (size_t b = 0; b < p; ++b) {
        worst_cov = std::max(worst_cov, std::fabs(est->covariance(a, b) - want.covariance[a][b]));
      }
    }
    auto eig = JacobiEigen(est->covariance);
    if (!eig.ok()) return Fail(std::string(eig.status().message()));
    double norm = 0.0, trace = 0.0, sum = 0.0;
    for (double v : est->covariance.data()) norm += v * v;
    norm = std::sqrt(norm);
    for (size_t i = 0; i < p; ++i) {
      trace += est->covariance(i, i);
      sum += eig->values[i];
      double r2 = 0.0;
      for (size_t a = 0; a < p; ++a) {
        double cw = 0.0;
        for (size_t b = 0; b < p; ++b) cw += est->covariance(a, b) * eig->vectors(b, i);
        r2 += std::pow(cw - eig->values[i] * eig->vectors(a, i), 2);
      }
      worst_res = std::max(worst_res, std::sqrt(r2) / norm);
      for (size_t j = 0; j < p; ++j) {
        double dot = 0.0;
        for (size_t a = 0; a < p; ++a) dot += eig->vectors(a, i) * eig->vectors(a, j);
        worst_orth = std::max(worst_orth, std::fabs(dot - (i == j ? 1.0 : 0.0)));
      }
    }
    worst_trace = std::max(worst_trace, std::fabs(sum - trace));
  }
  if (worst_cov > kCovarianceTol) misses.push_back(absl::StrFormat("covariance %.1e", worst_cov));
  if (worst_res > kEigenResidualRel) misses.push_back(absl::StrFormat("residual %.1e", worst_res));
  if (worst_orth > kOrthonormalTol) misses.push_back(absl::StrFormat("W^T W %.1e", worst_orth));
  if (worst_trace > kTraceTol) misses.push_back(absl::StrFormat("trace %.1e", worst_trace));

  Matrix c(2, 2);
  c(0, 0) = 0.5;
  c(0, 1) = -0.5;
  c(1, 0) = -0.5;
  c(1, 1) = 0.5;
  auto two = JacobiEigen(c);
  const double r = 1.0 / std::sqrt(2.0);
  const double err2 = std::max({std::fabs(two->values[0] - 1.0), std::fabs(two->values[1]),
                                std::fabs(two->vectors(0, 0) - r),
                                std::fabs(two->vectors(1, 0) + r)});
  if (err2 > kClosedForm2x2Tol) misses.push_back(absl::StrFormat("2x2 case %.1e", err2));

  auto report = testing::RunJob(DefaultTables(), DefaultPolicy(), "pca");
  if (!report.ok()) return Fail(std::string(report.status().message()));
  const size_t k = report->at("k").get<size_t>();
  if (k != kReportComponents || report->at("matrix")[0].size() != kReportComponents) {
    misses.push_back(absl::StrCat("report has ", k, " components"));
  }
  if (!misses.empty()) return Fail(absl::StrJoin(misses, "; "));
  return {true, absl::StrFormat("%d federations, %d features; covariance %.1e, residual %.1e, "
                                "W^T W %.1e, trace %.1e, 2x2 %.1e; report k = %d",
                                federations.size(), p, worst_cov, worst_res, worst_orth,
                                worst_trace, err2, k)};
}

// ------------------------------------------------------------------ 8

std::vector<std::string> ReadLines(const fs::path& path) {
  std::vector<std::string> lines;
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

void WriteLines(const fs::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::trunc);
  for (const std::string& l : lines) out << l << "\n";
}

Outcome PrivacyAudit() {
  const fs::path root = testing::TempDir("acceptance_audit");
  const std::string gen = (root / "gen").string();
  const std::string run = (root / "run").string();
  if (Cli({"generate", "--default", "--seed", "42", "--out", gen}) != 0) {
    return Fail("generate failed");
  }
  std::string text;
  if (int code = Cli({"run", "--workflow", "all", "--data", gen, "--out", run}, &text);
      code != 0) {
    return Fail(absl::StrCat("run exited ", code, ": ", text));
  }
  std::string audit;
  const int clean = Cli({"audit", "--run", (fs::path(run) / "manifest.json").string()}, &audit);
  const bool clean_ok = clean == 0 && audit.find(" 0 violations") != std::string::npos;
  const size_t scanned = ReadLines(fs::path(run) / "job_log.jsonl").size();

  // Fixture 1: one released count rewritten to 3 (k = 5).
  const fs::path small = root / "run_small_count";
  fs::copy(run, small, fs::copy_options::recursive);
  std::vector<std::string> lines = ReadLines(small / "job_log.jsonl");
  size_t tampered = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    json j = json::parse(lines[i]);
    if (!j.contains("payload") || !j["payload"].contains("counts")) continue;
    json& counts = j["payload"]["counts"];
    if (counts.contains("cells") && !counts["cells"].empty()) {
      counts["cells"][0] = 3;
      lines[i] = j.dump();
      tampered = i + 1;
      break;
    }
  }
  WriteLines(small / "job_log.jsonl", lines);
  std::string small_out;
  const int small_code =
      Cli({"audit", "--run", (small / "manifest.json").string()}, &small_out);
  const bool small_ok = tampered > 0 && small_code == kExitAudit &&
                        small_out.find(absl::StrCat("line ", tampered, ":")) != std::string::npos;

  // Fixture 2: a subject identifier smuggled into a request.
  const fs::path ident = root / "run_identifier";
  fs::copy(run, ident, fs::copy_options::recursive);
  const auto site = *LoadCsv((fs::path(gen) / "data" / "site-1.csv").string(), StandardSchema(),
                             "site-1");
  const std::string pid = std::get<std::string>(site.rows()[17][*site.schema().IndexOf("PID")]);
  lines = ReadLines(ident / "job_log.jsonl");
  for (std::string& line : lines) {
    json j = json::parse(line);
    if (!j.contains("broadcast")) continue;
    j["broadcast"]["note"] = pid;
    line = j.dump();
    break;
  }
  WriteLines(ident / "job_log.jsonl", lines);
  std::string ident_out;
  const int ident_code = Cli({"audit", "--run", (ident / "manifest.json").string()}, &ident_out);
  const bool ident_ok = ident_code == kExitAudit && ident_out.find("identifier") != std::string::npos;

  return {clean_ok && small_ok && ident_ok,
          absl::StrFormat("full run: exit %d over %d messages%s; small-count fixture exit %d; "
                          "identifier fixture exit %d",
                          clean, scanned, clean_ok ? ", 0 violations" : "", small_code,
                          ident_code)};
}

// ------------------------------------------------------------------ 9

Outcome OmopGolden() {
  auto sets = ExportOmop(testing::TwoRowCohort());
  if (!sets.ok()) return Fail(std::string(sets.status().message()));
  const std::map<std::string, int64_t> kRows = {
      {"PERSON", kOmopPersonRows},         {"VISIT_OCCURRENCE", 2},
      {"CONDITION_OCCURRENCE", 2},         {"DRUG_EXPOSURE", 2},
      {"OBSERVATION_PERIOD", 2},           {"OBSERVATION", kOmopObservationRows},
      {"MEASUREMENT", kOmopMeasurementRows}};
  std::vector<std::string> misses;
  for (const OmopRowSet& set : *sets) {
    const std::string name(OmopTableName(set.table));
    if (static_cast<int64_t>(set.rows.size()) != kRows.at(name)) {
      misses.push_back(absl::StrCat(name, " has ", set.rows.size(), " rows"));
    }
    auto golden = ReadFile((fs::path(FEDMED_GOLDEN_DIR) / "omop" / (name + ".csv")).string());
    if (!golden.ok()) {
      misses.push_back(absl::StrCat(name, " golden missing"));
    } else if (*golden != OmopRowSetCsv(set)) {
      misses.push_back(absl::StrCat(name, " differs from golden"));
    }
  }
  if (sets->size() != kRows.size()) misses.push_back("table count");
  if (!misses.empty()) return Fail(absl::StrJoin(misses, "; "));
  return {true, "7 tables match golden files: PERSON 2, OBSERVATION 14, MEASUREMENT 16, "
                "visit/condition/drug/period 2 each"};
}

// ------------------------------------------------------------------ 10

std::map<std::string, std::string> Tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    files[fs::relative(entry.path(), root).generic_string()] = *ReadFile(entry.path().string());
  }
  return files;
}

Outcome Determinism() {
  std::vector<std::map<std::string, std::string>> trees;
  for (const char* name : {"acceptance_det_a", "acceptance_det_b"}) {
    const fs::path root = testing::TempDir(name);
    if (Cli({"generate", "--default", "--seed", "42", "--out", (root / "gen").string()}) != 0 ||
        Cli({"run", "--workflow", "all", "--data", (root / "gen").string(), "--out",
             (root / "run").string()}) != 0) {
      return Fail("pipeline failed");
    }
    trees.push_back(Tree(root));
  }
  size_t differing = 0;
  for (const auto& [path, bytes] : trees[0]) {
    auto it = trees[1].find(path);
    if (it == trees[1].end() || it->second != bytes) ++differing;
  }
  const double elapsed = Seconds(kSuiteStart);
  const bool same = differing == 0 && trees[0].size() == trees[1].size();
  return {same && elapsed < kSuiteSeconds,
          absl::StrFormat("%d files, %d differing; suite time %.1f s", trees[0].size(), differing,
                          elapsed)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace fedmed

int main(int argc, char** argv) {
  using fedmed::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "simpson-reversal", fedmed::Simpson},
      {2, "tableone-calibration", fedmed::TableOneCalibration},
      {3, "statistics-oracle", fedmed::StatisticsOracle},
      {4, "kaplan-meier-oracle", fedmed::KmOracle},
      {5, "cox-correctness", fedmed::CoxCorrectness},
      {6, "survival-algebra", fedmed::SurvivalAlgebra},
      {7, "pca", fedmed::PcaChecks},
      {8, "privacy-audit", fedmed::PrivacyAudit},
      {9, "omop-export", fedmed::OmopGolden},
      {10, "determinism", fedmed::Determinism},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--criterion=", 0) == 0) only = std::atoi(arg.c_str() + 12);
    if (arg == "--criterion" && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  int failures = 0;
  int ran = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const fedmed::Outcome outcome = c.run();
    if (!outcome.pass) ++failures;
    std::printf("criterion %2d %-22s %s  %s\n", c.id, c.name, outcome.pass ? "PASS" : "FAIL",
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
