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

#include "dpdisc/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "dpdisc/error.h"
#include "gtest/gtest.h"

namespace dpdisc {
namespace {

double LaplaceCdf(double x, double scale) {
  return x < 0 ? 0.5 * std::exp(x / scale) : 1.0 - 0.5 * std::exp(-x / scale);
}

TEST(SeededRngTest, SameSeedAndStreamRepeat) {
  SeededRng a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.NextU64(), b.NextU64());
}

TEST(SeededRngTest, StreamsDiffer) {
  SeededRng a(42, 7), b(42, 8);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) equal += a.NextU64() == b.NextU64();
  EXPECT_EQ(equal, 0);
}

TEST(SeededRngTest, ForkIsPureAndLabelled) {
  const SeededRng root(1, 2);
  SeededRng x = root.Fork("a"), y = root.Fork("a"), z = root.Fork("b");
  EXPECT_EQ(x.NextU64(), y.NextU64());
  EXPECT_NE(root.Fork("a").NextU64(), z.NextU64());
}

TEST(SeededRngTest, UniformRanges) {
  SeededRng rng(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.OpenUniform();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
    ASSERT_LT(rng.UniformInt(7), 7u);
  }
}

TEST(SeededRngTest, UniformIntIsUnbiased) {
  SeededRng rng(11);
  std::vector<int> counts(3, 0);
  const int n = 300000;
  for (int i = 0; i < n; ++i) ++counts[rng.UniformInt(3)];
  for (int c : counts) EXPECT_NEAR(c / static_cast<double>(n), 1.0 / 3.0, 0.005);
}

TEST(SeededRngTest, StandardNormalMoments) {
  SeededRng rng(5);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.StandardNormal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.015);
}

TEST(LaplaceNoiseTest, ZeroScaleIsExactlyZero) {
  SeededRng rng(1);
  EXPECT_EQ(LaplaceNoise(0.0, rng), 0.0);
}

TEST(LaplaceNoiseTest, NegativeScaleRejected) {
  SeededRng rng(1);
  EXPECT_THROW(LaplaceNoise(-1.0, rng), Error);
}

TEST(LaplaceNoiseTest, MeanAndVariance) {
  for (double scale : {1.0, 2.5}) {
    SeededRng rng(17, static_cast<uint64_t>(scale * 10));
    const int n = 100000;
    std::vector<double> xs(n);
    double mean = 0;
    for (double& x : xs) {
      x = LaplaceNoise(scale, rng);
      mean += x;
    }
    mean /= n;
    double var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= n;
    EXPECT_NEAR(mean, 0.0, 0.05 * scale);
    EXPECT_NEAR(var, 2 * scale * scale, 0.1 * 2 * scale * scale);
  }
}

TEST(LaplaceNoiseTest, KolmogorovSmirnovAgainstClosedForm) {
  const double scale = 1.7;
  SeededRng rng(99);
  const int n = 100000;
  std::vector<double> xs(n);
  for (double& x : xs) x = LaplaceNoise(scale, rng);
  std::sort(xs.begin(), xs.end());
  double d = 0;
  for (int i = 0; i < n; ++i) {
    const double f = LaplaceCdf(xs[i], scale);
    d = std::max({d, std::fabs(f - i / static_cast<double>(n)),
                  std::fabs(f - (i + 1) / static_cast<double>(n))});
  }
  EXPECT_LE(d, 0.01);
}

TEST(GeometricNoiseTest, RejectsNonPositiveEpsilon) {
  SeededRng rng(1);
  EXPECT_THROW(GeometricNoise(0.0, rng), Error);
  EXPECT_THROW(GeometricNoise(-1.0, rng), Error);
}

TEST(GeometricNoiseTest, SymmetricAndRatio) {
  SeededRng rng(23);
  const int n = 100000;
  std::map<int64_t, int> freq;
  for (int i = 0; i < n; ++i) ++freq[GeometricNoise(1.0, rng)];
  // P(0)/P(1) = e.
  const double ratio = static_cast<double>(freq[0]) / freq[1];
  EXPECT_NEAR(ratio, std::exp(1.0), 0.1 * std::exp(1.0));
  // P(k) vs P(-k) within 3 sigma of the difference of two binomials.
  for (int k = 1; k <= 3; ++k) {
    const double a = freq[k], b = freq[-k];
    EXPECT_LE(std::fabs(a - b), 3.0 * std::sqrt(a + b)) << "k=" << k;
  }
  // Closed form: P(0) = (1 - a) / (1 + a) with a = e^-1.
  const double alpha = std::exp(-1.0);
  EXPECT_NEAR(freq[0] / static_cast<double>(n), (1 - alpha) / (1 + alpha), 0.01);
}

TEST(SampleWeightedIndexTest, Degenerate) {
  SeededRng rng(2);
  const std::vector<double> one = {1.0};
  EXPECT_EQ(SampleWeightedIndex(one, rng), 0u);
  const std::vector<double> first = {1.0, 0.0};
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(SampleWeightedIndex(first, rng), 0u);
}

TEST(SampleWeightedIndexTest, RejectsEmptyOrZero) {
  SeededRng rng(2);
  EXPECT_THROW(SampleWeightedIndex(std::vector<double>{}, rng), Error);
  EXPECT_THROW(SampleWeightedIndex(std::vector<double>{0.0, 0.0}, rng), Error);
  EXPECT_THROW(SampleWeightedIndex(std::vector<double>{1.0, -1.0}, rng), Error);
}

TEST(SampleWeightedIndexTest, UniformFrequencies) {
  SeededRng rng(8);
  const std::vector<double> w = {1, 1, 1, 1};
  std::vector<int> counts(4, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[SampleWeightedIndex(w, rng)];
  for (int c : counts) EXPECT_NEAR(c / static_cast<double>(n), 0.25, 0.02);
}

TEST(SampleLogWeightedIndexTest, MatchesLinearWeights) {
  SeededRng rng(9);
  // exp(-1000) underflows in linear space; relative weights 1:2:0.
  const std::vector<double> logw = {-1000.0, -1000.0 + std::log(2.0), -kInfinity};
  std::vector<int> counts(3, 0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) ++counts[SampleLogWeightedIndex(logw, rng)];
  EXPECT_EQ(counts[2], 0);
  EXPECT_NEAR(counts[0] / static_cast<double>(n), 1.0 / 3.0, 0.01);
}

TEST(BudgetLedgerTest, TenNinetySplit) {
  BudgetLedger ledger(PrivacyBudget{1.0, 0.0});
  const std::vector<std::pair<std::string, double>> parts = {{"disc", 0.1},
                                                             {"model", 0.9}};
  const auto children = ledger.Split(parts);
  ASSERT_EQ(children.size(), 2u);
  EXPECT_DOUBLE_EQ(children[0].epsilon, 0.1);
  EXPECT_DOUBLE_EQ(children[1].epsilon, 0.9);
  EXPECT_NEAR(ledger.spent_epsilon(), 1.0, 1e-12);
}

TEST(BudgetLedgerTest, EqualSplitAcrossColumns) {
  BudgetLedger ledger(PrivacyBudget{1.0, 0.0});
  for (int c = 0; c < 4; ++c) {
    EXPECT_DOUBLE_EQ(ledger.Spend("col" + std::to_string(c), 0.25).epsilon, 0.25);
  }
  EXPECT_THROW(ledger.Spend("extra", 0.01), Error);
}

TEST(BudgetLedgerTest, InfinityPreserved) {
  BudgetLedger ledger(PrivacyBudget::Infinite());
  EXPECT_TRUE(ledger.Spend("a", 0.3).is_infinite());
  EXPECT_TRUE(ledger.Spend("b", 0.7).is_infinite());
}

TEST(BudgetLedgerTest, OverspendIsAtomicForSplit) {
  BudgetLedger ledger(PrivacyBudget{2.0, 0.0});
  const std::vector<std::pair<std::string, double>> parts = {{"a", 0.6},
                                                             {"b", 0.6}};
  try {
    ledger.Split(parts);
    FAIL() << "expected overspend";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetOverspend);
  }
  EXPECT_TRUE(ledger.entries().empty());
}

TEST(BudgetLedgerTest, ConservationProperty) {
  SeededRng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const double total = 0.01 + 10 * rng.Uniform();
    BudgetLedger ledger(PrivacyBudget{total, 0.0});
    double fraction_left = 1.0;
    double children = 0;
    while (fraction_left > 1e-3) {
      const double f = std::min(fraction_left, 0.05 + 0.5 * rng.Uniform());
      children += ledger.Spend("x", f).epsilon;
      fraction_left -= f;
    }
    EXPECT_LE(children, total * (1 + 1e-12));
  }
}

TEST(PrivacyBudgetTest, Validation) {
  EXPECT_THROW((PrivacyBudget{-1.0, 0.0}).Validate(), Error);
  EXPECT_THROW((PrivacyBudget{1.0, 1.0}).Validate(), Error);
  EXPECT_NO_THROW(PrivacyBudget::Infinite().Validate());
}

}  // namespace
}  // namespace dpdisc
