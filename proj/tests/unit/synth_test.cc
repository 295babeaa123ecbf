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
#include <set>
#include <string>

#include "fedmed/cohort/csv.h"
#include "fedmed/cohort/schema.h"
#include "fedmed/synth/generator.h"
#include "fedmed/synth/random.h"
#include "gtest/gtest.h"
#include "tests/oracle/pooled.h"

namespace fedmed {
namespace {

std::vector<CohortTable> Default() {
  return *GenerateFederation(WithSeed(DefaultTwoSiteConfig(), kDefaultSeed));
}

TEST(RngTest, SameSeedSameDraws) {
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.Normal(), b.Normal());
  Rng c(10);
  EXPECT_NE(Rng(9).Uniform(), c.Uniform());
}

TEST(RngTest, UniformIntInclusive) {
  Rng r(1);
  std::set<int64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(r.UniformInt(2, 4));
  EXPECT_EQ(seen, (std::set<int64_t>{2, 3, 4}));
}

TEST(RngTest, CategoricalSkipsZeroWeights) {
  Rng r(2);
  const std::vector<double> w = {0.0, 1.0, 0.0};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(r.Categorical(w), 1u);
}

TEST(GeneratorTest, DefaultFederationShape) {
  const auto tables = Default();
  ASSERT_EQ(tables.size(), 2u);
  EXPECT_EQ(tables[0].num_rows() + tables[1].num_rows(), 1386u);
  EXPECT_EQ(tables[0].site_id(), "site-1");
  EXPECT_EQ(tables[1].site_id(), "site-2");
  EXPECT_EQ(tables[0].schema(), StandardSchema());
}

TEST(GeneratorTest, Deterministic) {
  const auto a = Default();
  const auto b = Default();
  EXPECT_EQ(WriteCsv(a[0]), WriteCsv(b[0]));
  EXPECT_EQ(WriteCsv(a[1]), WriteCsv(b[1]));
  const auto c = *GenerateFederation(WithSeed(DefaultTwoSiteConfig(), 43));
  EXPECT_NE(WriteCsv(a[0]), WriteCsv(c[0]));
}

TEST(GeneratorTest, SiteCorrelationsOpposePooled) {
  const auto tables = Default();
  for (const CohortTable& t : tables) {
    auto r = oracle::PearsonColumns(t, "LESION_VOLUME", "EDSS", {"LESION_VOLUME", "EDSS"});
    ASSERT_TRUE(r.has_value());
    EXPECT_LT(*r, -0.2) << t.site_id();
  }
  auto pooled = oracle::Pool(tables);
  auto r = oracle::PearsonColumns(pooled->table, "LESION_VOLUME", "EDSS",
                                  {"LESION_VOLUME", "EDSS"});
  EXPECT_GT(*r, 0.2);
}

TEST(GeneratorTest, DatesStayInWindows) {
  const auto tables = Default();
  for (const auto& [name, window] : DateVariableWindows()) {
    for (const CohortTable& t : tables) {
      auto values = t.NumericColumn(name);
      ASSERT_TRUE(values.ok());
      for (const auto& v : *values) {
        if (!v) continue;
        EXPECT_GE(*v, window.min.ToDays()) << name;
        EXPECT_LE(*v, window.max.ToDays()) << name;
      }
    }
  }
}

TEST(GeneratorTest, NegativeSubjectsNamesField) {
  FederationGenConfig config = DefaultTwoSiteConfig();
  config.sites[1].n_subjects = -3;
  const absl::Status s = ValidateConfig(config);
  EXPECT_EQ(s.code(), absl::StatusCode::kInvalidArgument);
  EXPECT_NE(s.message().find("ConfigInvalid"), std::string_view::npos);
  EXPECT_NE(s.message().find("n_subjects"), std::string_view::npos);
  EXPECT_FALSE(GenerateFederation(config).ok());
}

TEST(GeneratorTest, RejectsDuplicateSites) {
  FederationGenConfig config = DefaultTwoSiteConfig();
  config.sites[1].site_id = config.sites[0].site_id;
  EXPECT_FALSE(ValidateConfig(config).ok());
}

TEST(GeneratorTest, ConfigJsonRoundTrip) {
  const FederationGenConfig config = WithSeed(DefaultTwoSiteConfig(), 7);
  auto back = ConfigFromJson(ConfigToJson(config));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, config);
  EXPECT_FALSE(ConfigFromJson(nlohmann::json{{"sites", 3}}).ok());
}

}  // namespace
}  // namespace fedmed
