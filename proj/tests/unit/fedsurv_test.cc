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

#include <cmath>
#include <string>
#include <vector>

#include "fedmed/surv/baseline.h"
#include "fedmed/surv/cox.h"
#include "fedmed/surv/km.h"
#include "fedmed/surv/steps.h"
#include "fedmed/surv/survival.h"
#include "gtest/gtest.h"
#include "tests/oracle/pooled.h"
#include "tests/testing/fixtures.h"

namespace fedmed {
namespace {

using nlohmann::json;
using testing::SurvivalRow;
using testing::TableFromCells;

SurvivalRecord Rec(int64_t time, bool event, std::vector<double> x = {}) {
  SurvivalRecord r;
  r.time = time;
  r.event = event;
  r.x = std::move(x);
  return r;
}

TEST(SurvivalTest, EventDefinition) {
  auto records = DeriveSurvival(
      TableFromCells({SurvivalRow(5, 3.1, 0.0), SurvivalRow(6, 2.0, 0.0),
                      SurvivalRow(7, 6.0, 1.0), {{"EDSS", 4.0}}}));
  ASSERT_TRUE(records.ok());
  ASSERT_EQ(records->size(), 3u);
  EXPECT_TRUE((*records)[0].event);
  EXPECT_FALSE((*records)[1].event);
  EXPECT_FALSE((*records)[2].event);
  EXPECT_EQ((*records)[1].time, 6);
}

TEST(SurvivalTest, NegativeTime) {
  auto records = DeriveSurvival(TableFromCells({SurvivalRow(-2, 3.0, 0.0)}));
  EXPECT_EQ(records.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_NE(records.status().message().find("NegativeTime"), std::string_view::npos);
}

TEST(SurvivalTest, FeaturesRequireCompleteCases) {
  auto records = DeriveSurvival(
      TableFromCells({SurvivalRow(5, 3.0, 0.0, {{"SDMT", 50}}), SurvivalRow(5, 3.0, 0.0)}),
      kDefaultEventThreshold, {"SDMT"});
  ASSERT_TRUE(records.ok());
  ASSERT_EQ(records->size(), 1u);
  EXPECT_EQ((*records)[0].x, std::vector<double>{50});
}

TEST(KmTest, FiveSubjectExample) {
  const std::vector<SurvivalRecord> records = {Rec(10, true), Rec(40, true), Rec(100, false),
                                               Rec(100, false), Rec(100, false)};
  EXPECT_EQ(IntervalsFor(100, 30), 4);
  auto counts = LocalIntervalCounts(records, 30, IntervalsFor(100, 30), 1);
  ASSERT_TRUE(counts.ok());
  ASSERT_EQ(counts->size(), 4u);
  EXPECT_EQ((*counts)[0], (IntervalCounts{0, 30, 1, 0, 5}));
  EXPECT_EQ((*counts)[1], (IntervalCounts{30, 60, 1, 0, 4}));
  EXPECT_EQ((*counts)[3], (IntervalCounts{90, 120, 0, 3, 3}));
  const KaplanMeierCurve km = KaplanMeierFromCounts(*counts);
  EXPECT_DOUBLE_EQ(km.intervals[0].survival, 0.8);
  EXPECT_DOUBLE_EQ(km.intervals[1].survival, 0.6);
  EXPECT_DOUBLE_EQ(km.intervals[3].survival, 0.6);
}

TEST(KmTest, MergesToThreshold) {
  std::vector<SurvivalRecord> records;
  for (int i = 0; i < 15; ++i) records.push_back(Rec(i * 10, i % 3 != 0));
  auto counts = LocalIntervalCounts(records, 30, IntervalsFor(140, 30), 5);
  ASSERT_TRUE(counts.ok());
  int64_t d = 0, c = 0;
  for (const IntervalCounts& cell : *counts) {
    EXPECT_TRUE(cell.d == 0 || cell.d >= 5);
    EXPECT_TRUE(cell.c == 0 || cell.c >= 5);
    d += cell.d;
    c += cell.c;
  }
  EXPECT_EQ(d, 10);
  EXPECT_EQ(c, 5);
  EXPECT_EQ(counts->front().n_at_risk, 15);
  EXPECT_FALSE(LocalIntervalCounts({Rec(1, true)}, 30, 1, 5).ok());
}

TEST(KmTest, CountsOnGridIgnoresOutside) {
  const auto counts = CountsOnGrid({Rec(5, true), Rec(35, false), Rec(70, true)}, {0, 30, 60});
  ASSERT_EQ(counts.size(), 2u);
  EXPECT_EQ(counts[0].n_at_risk, 2);  // time 70 lies past the last boundary
  EXPECT_EQ(counts[1].c, 1);
}

TEST(CoxTest, TermsAtZero) {
  auto t = LocalCoxTerms({Rec(1, true, {0}), Rec(2, true, {1}), Rec(3, false, {1})}, {0.0});
  ASSERT_TRUE(t.ok());
  EXPECT_NEAR(t->loglik, -std::log(3.0) - std::log(2.0), 1e-15);
  EXPECT_NEAR(t->gradient[0], -2.0 / 3.0, 1e-15);
  EXPECT_NEAR(t->hessian(0, 0), -2.0 / 9.0, 1e-15);
  EXPECT_EQ(t->events, 2);
  EXPECT_EQ(t->n, 3);
}

TEST(CoxTest, ClosedFormMaximizer) {
  const std::vector<SurvivalRecord> records = {Rec(1, true, {1}), Rec(2, true, {0}),
                                               Rec(3, false, {1})};
  auto fit = MaximizePartialLikelihood(
      [&](const std::vector<double>& b) { return LocalCoxTerms(records, b); }, 1);
  ASSERT_TRUE(fit.ok());
  EXPECT_TRUE(fit->converged);
  EXPECT_NEAR(fit->beta[0], -0.5 * std::log(2.0), 1e-9);
}

TEST(CoxTest, ConstantCovariateHasZeroGradient) {
  auto t = LocalCoxTerms({Rec(1, true, {4}), Rec(2, true, {4}), Rec(3, false, {4})}, {0.7});
  ASSERT_TRUE(t.ok());
  EXPECT_NEAR(t->gradient[0], 0.0, 1e-15);
  EXPECT_NEAR(t->hessian(0, 0), 0.0, 1e-15);
}

TEST(CoxTest, NoEventsGivesZeroTerms) {
  auto t = LocalCoxTerms({Rec(1, false, {1, 2}), Rec(2, false, {3, 4})}, {0.1, 0.2});
  ASSERT_TRUE(t.ok());
  EXPECT_EQ(t->loglik, 0.0);
  EXPECT_EQ(t->gradient, (std::vector<double>{0, 0}));
  EXPECT_EQ(t->events, 0);
}

TEST(CoxTest, DimensionMismatch) {
  EXPECT_FALSE(LocalCoxTerms({Rec(1, true, {1})}, {0.0, 1.0}).ok());
  CoxTerms a = ZeroCoxTerms(2);
  EXPECT_FALSE(AddCoxTerms(a, ZeroCoxTerms(3)).ok());
}

TEST(CoxTest, MatchesOracleDerivatives) {
  const CohortTable table = testing::GeneratedTable(150, 31);
  const std::vector<std::string> features = {"SDMT", "RELAPSE"};
  auto records = DeriveSurvival(table, kDefaultEventThreshold, features);
  ASSERT_TRUE(records.ok());
  auto pooled = oracle::Pool({table});
  const auto subjects = oracle::Subjects(*pooled, kDefaultEventThreshold, features);
  const std::vector<double> beta = {-0.02, 0.1};
  auto t = LocalCoxTerms(*records, beta);
  ASSERT_TRUE(t.ok());
  EXPECT_NEAR(t->loglik, oracle::StratifiedLoglik(subjects, beta), 1e-9);
  const auto g = oracle::StratifiedGradient(subjects, beta);
  const auto h = oracle::StratifiedHessian(subjects, beta);
  for (size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(t->gradient[i], g[i], 1e-8 * (1 + std::fabs(g[i])));
    for (size_t j = 0; j < 2; ++j) {
      EXPECT_NEAR(t->hessian(i, j), h[i][j], 1e-8 * (1 + std::fabs(h[i][j])));
    }
  }
}

TEST(CoxTest, SingularHessian) {
  Matrix h(2, 2);
  h(0, 0) = -1;
  h(0, 1) = -1;
  h(1, 0) = -1;
  h(1, 1) = -1;
  auto step = SolveNewtonStep(h, {1.0, 1.0});
  if (step.ok()) {
    EXPECT_NEAR((*step)[0] + (*step)[1], 1.0, 1e-6);
  } else {
    EXPECT_EQ(step.status().code(), absl::StatusCode::kFailedPrecondition);
  }
  Matrix zero(1, 1);
  auto inactive = SolveNewtonStep(zero, {3.0});
  ASSERT_TRUE(inactive.ok());
  EXPECT_EQ((*inactive)[0], 0.0);
}

TEST(CoxTest, RoundBudgetExhausted) {
  const std::vector<SurvivalRecord> records = {Rec(1, true, {1}), Rec(2, true, {0}),
                                               Rec(3, false, {1})};
  CoxOptions options;
  options.max_rounds = 1;
  auto fit = MaximizePartialLikelihood(
      [&](const std::vector<double>& b) { return LocalCoxTerms(records, b); }, 1, options);
  EXPECT_EQ(fit.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_NE(fit.status().message().find("NotConverged"), std::string_view::npos);
}

TEST(BaselineTest, BreslowQuarter) {
  const std::vector<SurvivalRecord> records = {Rec(10, true, {0}), Rec(20, false, {0}),
                                               Rec(30, true, {0}), Rec(40, false, {0})};
  EXPECT_DOUBLE_EQ(BreslowHazardAt(records, {0.0}, 10), 0.25);
  EXPECT_DOUBLE_EQ(BreslowHazardAt(records, {0.0}, 9), 0.0);
  const auto steps = BreslowBaseline(records, {0.0}, {0, 10, 30, 60});
  ASSERT_EQ(steps.size(), 4u);
  EXPECT_EQ(steps[0], (StepPoint{0, 0.0}));
  EXPECT_EQ(steps[1].value, 0.0);   // events strictly before 10
  EXPECT_EQ(steps[2].value, 0.25);
  EXPECT_DOUBLE_EQ(steps[3].value, 0.75);
  EXPECT_EQ(EvaluateStep(steps, 45), 0.25);
  EXPECT_EQ(EvaluateStep(steps, -1), 0.0);
}

TEST(BaselineTest, SurvivalAlgebra) {
  EXPECT_DOUBLE_EQ(SurvivalFromHazard(std::log(2.0), {0.0}, {1.0}), 0.5);
  EXPECT_DOUBLE_EQ(SurvivalFromHazard(std::log(2.0), {std::log(2.0)}, {1.0}), 0.25);
  EXPECT_EQ(SurvivalFromHazard(0.0, {3.0}, {2.0}), 1.0);
}

TEST(BaselineTest, DisplayCurveWeightsSites) {
  SiteBaseline a{"a", 1, {0.0}, {{0, 0.0}, {10, std::log(2.0)}}};
  SiteBaseline b{"b", 3, {0.0}, {{0, 0.0}, {20, std::log(4.0)}}};
  const auto curve = DisplaySurvival({a, b}, {0.5});
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_DOUBLE_EQ(curve[0].value, 1.0);
  EXPECT_DOUBLE_EQ(curve[1].value, 0.25 * 0.5 + 0.75);
  EXPECT_DOUBLE_EQ(curve[2].value, 0.25 * 0.5 + 0.75 * 0.25);
}

TEST(BaselineTest, NormalizedCoefficients) {
  const auto n = NormalizeCoefficients({"A", "B"}, {2.0, 1.5}, {0.5, 0.0});
  ASSERT_EQ(n.size(), 2u);
  EXPECT_DOUBLE_EQ(n[0].reported, 1.0);
  EXPECT_FALSE(n[0].zero_mean);
  EXPECT_TRUE(n[1].zero_mean);
  EXPECT_EQ(n[1].reported, 1.5);
}

TEST(FederatedSurvivalTest, KmMatchesOracleOnFederatedGrid) {
  const CohortTable table = testing::GeneratedTable(300, 32);
  const auto parts = testing::Partition(table, 3, 6);
  auto km = testing::RunJob(parts, DefaultPolicy(), "km");
  ASSERT_TRUE(km.ok()) << km.status();
  std::vector<int64_t> grid = {0};
  for (const json& iv : km->at("intervals")) grid.push_back(iv.at("t_hi").get<int64_t>());
  auto pooled = oracle::Pool(parts);
  const auto want = oracle::KaplanMeier(oracle::Subjects(*pooled, kDefaultEventThreshold, {}),
                                        grid);
  ASSERT_EQ(want.size(), km->at("intervals").size());
  for (size_t i = 0; i < want.size(); ++i) {
    const json& got = km->at("intervals")[i];
    EXPECT_EQ(got.at("d").get<int64_t>(), want[i].d);
    EXPECT_EQ(got.at("n").get<int64_t>(), want[i].n);
    EXPECT_NEAR(got.at("S").get<double>(), want[i].s, 1e-12);
    if (got.at("d").get<int64_t>() > 0) EXPECT_GE(got.at("d").get<int64_t>(), 5);
  }
}

TEST(FederatedSurvivalTest, CoxJobShape) {
  const CohortTable table = testing::GeneratedTable(300, 33);
  auto cox = testing::RunJob(testing::Partition(table, 2, 7), DefaultPolicy(), "cox",
                             {{"features", {"SDMT", "T25FWT"}}});
  ASSERT_TRUE(cox.ok()) << cox.status();
  EXPECT_TRUE(cox->at("converged").get<bool>());
  EXPECT_EQ(cox->at("beta").size(), 2u);
  EXPECT_EQ(cox->at("baseline").size(), 2u);
  EXPECT_LE(cox->at("rounds").get<int>(), 30);
  double prev = 1.0;
  for (const json& pt : cox->at("survival")) {
    EXPECT_LE(pt.at("S").get<double>(), prev);
    prev = pt.at("S").get<double>();
  }
}

TEST(FederatedSurvivalTest, RejectsUnknownParams) {
  const CohortTable table = testing::GeneratedTable(60, 34);
  auto bad = testing::RunJob({table}, DefaultPolicy(), "cox", {{"features", "SDMT"}});
  EXPECT_EQ(bad.status().code(), absl::StatusCode::kInvalidArgument);
  auto extra = testing::RunJob({table}, DefaultPolicy(), "km", {{"bogus", 1}});
  EXPECT_EQ(extra.status().code(), absl::StatusCode::kInvalidArgument);
}

}  // namespace
}  // namespace fedmed
