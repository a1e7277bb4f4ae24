//
// Copyright 2026 The dpdisc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#include "dpdisc/attacks.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dpdisc/controlled.h"
#include "dpdisc/error.h"
#include "gtest/gtest.h"

namespace dpdisc {
namespace {

Table Columns(std::vector<std::vector<double>> cols) {
  Table t;
  for (size_t i = 0; i < cols.size(); ++i) {
    t.columns.push_back({"c" + std::to_string(i), std::move(cols[i]), false});
  }
  return t;
}

std::vector<Domain> RawOf(const Table& t) {
  std::vector<Domain> out;
  for (const Column& c : t.columns) out.push_back(ExtractDomainRaw(c.values));
  return out;
}

// Quadratic pairwise definition.
double PairwiseAuc(const std::vector<double>& in, const std::vector<double>& out) {
  double wins = 0.0;
  for (double a : in) {
    for (double b : out) wins += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
  }
  return wins / (in.size() * out.size());
}

TEST(SelectTargetTest, PlantedOutlier) {
  const Table t = Columns({{1, 2, 3, 2, 100}, {5, 5, 6, 5, 5}});
  const TargetRecord target =
      SelectTarget(t, std::vector<Domain>(2, ProvidedDomain(0, 100)));
  EXPECT_EQ(target.index, 4u);
  EXPECT_EQ(target.values, (std::vector<double>{100, 5}));
  EXPECT_TRUE(target.outside_domain);
}

TEST(SelectTargetTest, TieGoesToLowestIndex) {
  const Table t = Columns({{0, 1}});
  EXPECT_EQ(SelectTarget(t, RawOf(t)).index, 0u);
}

TEST(SelectTargetTest, MatchesBruteForce) {
  SeededRng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    Table t = Columns({std::vector<double>(5), std::vector<double>(5)});
    for (auto& c : t.columns) {
      for (double& x : c.values) x = std::floor(rng.Uniform() * 6);
    }
    const std::vector<Domain> dom = {ProvidedDomain(0, 6), ProvidedDomain(0, 12)};
    std::vector<double> total(5, 0.0);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const double dx = (t.columns[0].values[i] - t.columns[0].values[j]) / 6;
        const double dy = (t.columns[1].values[i] - t.columns[1].values[j]) / 12;
        total[i] += std::sqrt(dx * dx + dy * dy);
      }
    }
    if (*std::max_element(total.begin(), total.end()) == 0.0) continue;
    size_t best = 0;
    for (size_t i = 1; i < 5; ++i) {
      if (total[i] > total[best] + 1e-12) best = i;
    }
    EXPECT_EQ(SelectTarget(t, dom).index, best) << "trial " << trial;
  }
}

TEST(SelectTargetTest, IdenticalRecordsHaveNoTarget) {
  const Table t = Columns({{3, 3, 3}, {1, 1, 1}});
  try {
    SelectTarget(t, std::vector<Domain>(2, ProvidedDomain(0, 5)));
    FAIL() << "expected kNoTarget";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoTarget);
  }
}

TEST(GroundhogTest, Features) {
  const std::vector<double> f = GroundhogFeatures(Columns({{7, 7, 7, 7}, {4, 1, 3, 2}}));
  ASSERT_EQ(f.size(), 10u);
  EXPECT_EQ((std::vector<double>(f.begin(), f.begin() + 5)),
            (std::vector<double>{7, 7, 7, 7, 0}));
  EXPECT_DOUBLE_EQ(f[5], 1);
  EXPECT_DOUBLE_EQ(f[6], 4);
  EXPECT_DOUBLE_EQ(f[7], 2.5);
  EXPECT_DOUBLE_EQ(f[8], 2.5);
  EXPECT_NEAR(f[9], std::sqrt(1.25), 1e-12);
  EXPECT_THROW(GroundhogFeatures(Columns({{}})), Error);
}

TEST(QuerybasedTest, ToyTable) {
  const Table synth = Columns({{0.1, 0.1, 0.9}, {0.1, 0.9, 0.9}});
  const std::vector<BinSpec> specs(2, FitUniform(ProvidedDomain(0, 1), 2));
  const std::vector<double> target = {0.2, 0.8};
  // Subsets in bitmask order: {}, {c0}, {c1}, {c0, c1}.
  EXPECT_EQ(QuerybasedFeatures(synth, target, specs),
            (std::vector<double>{3, 2, 2, 1}));
}

TEST(QuerybasedTest, MatchesBruteForce) {
  SeededRng rng(2);
  const size_t d = 4;
  Table synth = Columns(std::vector<std::vector<double>>(d, std::vector<double>(200)));
  for (auto& c : synth.columns) {
    for (double& x : c.values) x = rng.Uniform();
  }
  const std::vector<BinSpec> specs(d, FitUniform(ProvidedDomain(0, 1), 3));
  const std::vector<double> target = {0.1, 0.5, 0.9, 0.4};
  const std::vector<double> f = QuerybasedFeatures(synth, target, specs);
  ASSERT_EQ(f.size(), 16u);
  EXPECT_EQ(f[0], 200.0);
  for (size_t s = 0; s < 16; ++s) {
    double count = 0;
    for (size_t r = 0; r < 200; ++r) {
      bool ok = true;
      for (size_t c = 0; c < d; ++c) {
        if (s >> c & 1) {
          ok = ok && specs[c].BinOf(synth.columns[c].values[r]) == specs[c].BinOf(target[c]);
        }
      }
      count += ok;
    }
    EXPECT_EQ(f[s], count) << "subset " << s;
  }
}

TEST(QuerybasedTest, TooManyColumns) {
  const Table wide = Columns(std::vector<std::vector<double>>(13, {0.5}));
  const std::vector<BinSpec> specs(13, FitUniform(ProvidedDomain(0, 1), 2));
  try {
    QuerybasedFeatures(wide, std::vector<double>(13, 0.5), specs);
    FAIL() << "expected kFeatureExplosion";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFeatureExplosion);
  }
}

TEST(AucTest, Examples) {
  EXPECT_DOUBLE_EQ(Auc(std::vector<double>{0.9, 0.4}, std::vector<double>{0.5, 0.1}), 0.75);
  EXPECT_DOUBLE_EQ(Auc(std::vector<double>{2, 3}, std::vector<double>{0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(Auc(std::vector<double>{1, 1}, std::vector<double>{1, 1, 1}), 0.5);
  EXPECT_THROW(Auc(std::vector<double>{}, std::vector<double>{1}), Error);
}

TEST(AucTest, MatchesPairwiseAndIsRankInvariant) {
  SeededRng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> in(1 + rng.UniformInt(20)), out(1 + rng.UniformInt(20));
    for (double& x : in) x = std::floor(rng.Uniform() * 5);
    for (double& x : out) x = std::floor(rng.Uniform() * 5) - 1;
    const double auc = Auc(in, out);
    EXPECT_NEAR(auc, PairwiseAuc(in, out), 1e-12);
    EXPECT_NEAR(Auc(out, in), 1.0 - auc, 1e-12);
    std::vector<double> in_t = in, out_t = out;
    for (double& x : in_t) x = std::exp(x) * 3 + 1;
    for (double& x : out_t) x = std::exp(x) * 3 + 1;
    EXPECT_NEAR(Auc(in_t, out_t), auc, 1e-12);
  }
}

TEST(ShadowGameTest, ConstantSynthesizerGivesChance) {
  const Table data = Columns({{1, 2, 3, 4, 50}});
  const TargetRecord target = SelectTarget(data, RawOf(data));
  ShadowGameConfig config;
  config.n_models_per_class = 20;
  const Synthesizer constant = [](const Table&, SeededRng&) {
    return Columns({{1, 2, 3}});
  };
  EXPECT_NEAR(RunShadowGame(data, target, config, constant).auc, 0.5, 0.1);
}

class PlantedGameTest : public testing::Test {
 protected:
  static void SetUpTestSuite() {
    WineLikeSpec spec;
    spec.n = 2000;
    spec.seed = 4;
    spec.plant_target = true;
    data_ = new Table(GenWineLike(spec));
  }
  static void TearDownTestSuite() { delete data_; }
  static Table* data_;
};
Table* PlantedGameTest::data_ = nullptr;

TEST_F(PlantedGameTest, PlantIsTheTarget) {
  const TargetRecord target = SelectTarget(*data_, RawOf(*data_));
  EXPECT_EQ(target.index, 1999u);
  EXPECT_TRUE(target.outside_domain);
}

TEST_F(PlantedGameTest, RawDomainLeaksMembership) {
  const TargetRecord target = SelectTarget(*data_, RawOf(*data_));
  ShadowGameConfig config;
  config.domain_strategy = DomainSource::kRaw;
  config.seed = 5;
  EXPECT_GE(RunShadowGame(*data_, target, config).auc, 0.95);
}

TEST_F(PlantedGameTest, DpDomainHidesMembership) {
  const TargetRecord target = SelectTarget(*data_, RawOf(*data_));
  ShadowGameConfig config;
  config.domain_strategy = DomainSource::kDp;
  config.seed = 5;
  EXPECT_LE(RunShadowGame(*data_, target, config).auc, 0.6);
}

TEST(ShadowGameTest, DeterministicAcrossJobs) {
  WineLikeSpec spec;
  spec.n = 200;
  spec.seed = 6;
  spec.plant_target = true;
  const Table data = GenWineLike(spec);
  const TargetRecord target = SelectTarget(data, RawOf(data));
  ShadowGameConfig config;
  config.n_models_per_class = 10;
  config.seed = 7;
  config.extractor = FeatureExtractor::kQuerybased;
  const AttackScore a = RunShadowGame(data, target, config);
  config.jobs = 3;
  const AttackScore b = RunShadowGame(data, target, config);
  EXPECT_EQ(a.auc, b.auc);
  EXPECT_EQ(a.features_in, b.features_in);
  EXPECT_EQ(a.fingerprint, b.fingerprint);
}

TEST(ShadowGameTest, ConfigValidation) {
  ShadowGameConfig config;
  config.n_models_per_class = 3;
  EXPECT_THROW(config.Validate(), Error);
  config.n_models_per_class = 4;
  config.epsilon_generator = 0.0;
  EXPECT_THROW(config.Validate(), Error);
  EXPECT_EQ(ParseExtractor("querybased"), FeatureExtractor::kQuerybased);
  EXPECT_THROW(ParseExtractor("shadow"), Error);
}

}  // namespace
}  // namespace dpdisc
