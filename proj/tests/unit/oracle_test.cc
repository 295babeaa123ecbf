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
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "tests/oracle/pooled.h"
#include "tests/testing/fixtures.h"

namespace fedmed::oracle {
namespace {

TEST(OracleTest, OrderQuantile) {
  EXPECT_EQ(OrderQuantile({5, 1, 3, 2, 4}, 0.5), 3.0);
  EXPECT_EQ(OrderQuantile({1, 2, 3, 4}, 0.75), 3.0);
  const Summary s = Summarize({1, 2, 3, 4, 5});
  EXPECT_EQ(s.median, 3.0);
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_DOUBLE_EQ(s.sd, std::sqrt(2.5));
}

TEST(OracleTest, Pearson) {
  const std::vector<std::optional<double>> x = {1, 2, 3, 4};
  EXPECT_NEAR(*Pearson(x, x), 1.0, 1e-15);
  const std::vector<std::optional<double>> y = {4, 3, 2, 1};
  EXPECT_NEAR(*Pearson(x, y), -1.0, 1e-15);
  const std::vector<std::optional<double>> c = {2, 2, 2, 2};
  EXPECT_FALSE(Pearson(x, c).has_value());
}

TEST(OracleTest, KaplanMeierWithoutEvents) {
  std::vector<Subject> subjects = {{0, 5, false, {}}, {0, 50, false, {}}};
  const auto km = KaplanMeier(subjects, {0, 30, 60});
  ASSERT_EQ(km.size(), 2u);
  EXPECT_EQ(km[0].n, 2);
  EXPECT_EQ(km[1].n, 1);
  EXPECT_EQ(km[1].s, 1.0);
}

TEST(OracleTest, CoxClosedForm) {
  std::vector<Subject> subjects = {{0, 1, true, {1}}, {0, 2, true, {0}}, {0, 3, false, {1}}};
  EXPECT_NEAR(StratifiedLoglik(subjects, {0.0}), -std::log(6.0), 1e-15);
  const CoxResult fit = CentralizedStratifiedCox(subjects, 1);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.beta[0], -0.5 * std::log(2.0), 1e-9);
}

TEST(OracleTest, StrataAreIndependent) {
  std::vector<Subject> a = {{0, 1, true, {1}}, {0, 2, true, {0}}, {0, 3, false, {1}}};
  std::vector<Subject> b = a;
  for (Subject& s : b) s.stratum = 1;
  std::vector<Subject> both = a;
  both.insert(both.end(), b.begin(), b.end());
  EXPECT_NEAR(StratifiedLoglik(both, {0.3}), 2 * StratifiedLoglik(a, {0.3}), 1e-14);
}

TEST(OracleTest, PooledPcaTwoRows) {
  const CohortTable t = testing::TableFromCells(
      {{{"SEX", std::string("M")}}, {{"SEX", std::string("F")}}});
  const Pca pca = PooledPca(t, {"SEX"});
  EXPECT_EQ(pca.features, (std::vector<std::string>{"SEX=F", "SEX=M"}));
  EXPECT_NEAR(pca.covariance[0][1], -0.5, 1e-15);
  EXPECT_NEAR(pca.eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(pca.eigenvalues[1], 0.0, 1e-14);
}

}  // namespace
}  // namespace fedmed::oracle
