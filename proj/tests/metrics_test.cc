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
#include "dpdisc/metrics.h"

#include <algorithm>
#include <cmath>
#include <vector>

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

std::vector<double> UniformSample(size_t n, SeededRng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.Uniform();
  return v;
}

// Expected ratio of one random query of dimension k: a uniform k-subset of
// columns, then a uniform tuple of non-empty bin masks over it.
double ExhaustiveQueryScore(const EncodedTable& a, const EncodedTable& b,
                            const std::vector<int>& bins, int k) {
  const size_t d = bins.size();
  double total = 0.0;
  int subsets = 0;
  auto fraction = [](const EncodedTable& t, const std::vector<size_t>& cols,
                     const std::vector<unsigned>& masks) {
    const size_t rows = t.front().size();
    size_t hit = 0;
    for (size_t r = 0; r < rows; ++r) {
      bool ok = true;
      for (size_t i = 0; i < cols.size(); ++i) ok = ok && ((masks[i] >> t[cols[i]][r]) & 1u);
      hit += ok;
    }
    return static_cast<double>(hit) / rows;
  };
  for (unsigned subset = 0; subset < (1u << d); ++subset) {
    std::vector<size_t> cols;
    for (size_t c = 0; c < d; ++c) {
      if (subset >> c & 1u) cols.push_back(c);
    }
    if (static_cast<int>(cols.size()) != k) continue;
    std::vector<unsigned> masks(k, 1u);
    double subset_total = 0.0;
    long count = 0;
    while (true) {
      const double fa = fraction(a, cols, masks), fb = fraction(b, cols, masks);
      const double hi = std::max(fa, fb);
      subset_total += hi == 0.0 ? 1.0 : std::min(fa, fb) / hi;
      ++count;
      size_t i = 0;
      while (i < cols.size() && ++masks[i] == (1u << bins[cols[i]])) masks[i++] = 1u;
      if (i == cols.size()) break;
    }
    total += subset_total / count;
    ++subsets;
  }
  return total / subsets;
}

TEST(RecordSimilarityTest, Examples) {
  const std::vector<Domain> dom = {ProvidedDomain(0, 10)};
  const Table a = Columns({{1, 2, 3, 4}});
  EXPECT_DOUBLE_EQ(RecordSimilarity(a, a, dom), 1.0);
  EXPECT_DOUBLE_EQ(RecordSimilarity(Columns({{0, 0}}), Columns({{10, 10}}), dom), 0.0);
  EXPECT_DOUBLE_EQ(RecordSimilarity(Columns({{0, 0}}), Columns({{0, 10}}), dom), 0.5);
  EXPECT_THROW(RecordSimilarity(a, Columns({{1, 2}}), dom), Error);
}

TEST(MaxPercentileDistanceTest, Examples) {
  SeededRng rng(1);
  const std::vector<double> v = UniformSample(5000, rng);
  EXPECT_DOUBLE_EQ(MaxPercentileDistance(v, v), 1.0);
  EXPECT_NEAR(MaxPercentileDistance(std::vector<double>(10, 0.0),
                                    std::vector<double>(10, 1.0)),
              0.0, 1e-12);
  std::vector<double> shifted = v;
  for (double& x : shifted) x += 0.1;
  EXPECT_NEAR(MaxPercentileDistance(v, shifted), 0.9, 0.01);
  EXPECT_DOUBLE_EQ(MaxPercentileDistance(std::vector<double>{2.0}, std::vector<double>{2.0}), 1.0);
  EXPECT_THROW(MaxPercentileDistance(std::vector<double>{}, v), Error);
}

TEST(DiscriminatorTest, ScoreExamples) {
  EXPECT_DOUBLE_EQ(DiscriminatorScore(std::vector<double>(10, 0.5)), 1.0);
  EXPECT_DOUBLE_EQ(DiscriminatorScore(std::vector<double>{0.0, 1.0, 0.0, 1.0}), 0.0);
  EXPECT_DOUBLE_EQ(DiscriminatorScore(std::vector<double>{0.25, 0.75}), 0.5);
}

TEST(DiscriminatorTest, BootstrapIsIndistinguishable) {
  SeededRng rng(2);
  const Table real = Columns({UniformSample(2000, rng), UniformSample(2000, rng)});
  Table boot = real;
  for (size_t r = 0; r < real.num_rows(); ++r) {
    const size_t pick = rng.UniformInt(real.num_rows());
    for (size_t c = 0; c < 2; ++c) boot.columns[c].values[r] = real.columns[c].values[pick];
  }
  EXPECT_GE(DiscriminatorSimilarity(real, boot, rng), 0.9);
}

TEST(DiscriminatorTest, ShiftedDataIsDetected) {
  SeededRng rng(3);
  const Table real = Columns({UniformSample(2000, rng)});
  Table fake = real;
  for (double& x : fake.columns[0].values) x += 3.0;
  EXPECT_LT(DiscriminatorSimilarity(real, fake, rng), 0.1);
}

TEST(QuerySimilarityTest, SingleQueryByHand) {
  const EncodedTable a = {{0, 0, 1, 1}, {0, 1, 0, 1}};
  const EncodedTable b = {{0, 1, 1, 1}, {1, 1, 1, 1}};
  // c0 in {0} and c1 in {1}: 1/4 of each.
  BinQuery q1{{{0, {true, false}}, {1, {false, true}}}};
  EXPECT_DOUBLE_EQ(ScoreQueries(a, b, std::vector<BinQuery>{q1}), 1.0);
  // c0 in {1}: 1/2 of a, 3/4 of b.
  BinQuery q2{{{0, {false, true}}}};
  EXPECT_NEAR(ScoreQueries(a, b, std::vector<BinQuery>{q2}), 2.0 / 3.0, 1e-12);
  // c1 in {0}: 1/2 of a, none of b.
  BinQuery q3{{{1, {true, false}}}};
  EXPECT_DOUBLE_EQ(ScoreQueries(a, b, std::vector<BinQuery>{q3}), 0.0);
  EXPECT_NEAR(ScoreQueries(a, b, std::vector<BinQuery>{q1, q2, q3}), 5.0 / 9.0, 1e-12);
  // Neither table matches: 0/0 counts as 1.
  BinQuery q4{{{0, {true, false}}, {1, {true, false}}}};
  EXPECT_DOUBLE_EQ(ScoreQueries(b, b, std::vector<BinQuery>{q4}), 1.0);
}

TEST(QuerySimilarityTest, SampledScoreConvergesToExhaustiveMean) {
  SeededRng rng(4);
  const std::vector<int> bins = {2, 3, 4};
  EncodedTable a(3), b(3);
  for (size_t c = 0; c < 3; ++c) {
    for (int r = 0; r < 60; ++r) {
      a[c].push_back(static_cast<int>(rng.UniformInt(bins[c])));
      b[c].push_back(static_cast<int>(rng.UniformInt(bins[c])) * (r % 3 == 0 ? 0 : 1));
    }
  }
  for (int k : {1, 2, 3}) {
    const std::vector<int> dims = {k};
    const auto queries = SampleQueries(bins, dims, 40000, rng);
    EXPECT_NEAR(ScoreQueries(a, b, queries), ExhaustiveQueryScore(a, b, bins, k), 0.01)
        << "k=" << k;
  }
}

TEST(QuerySimilarityTest, QueryShapes) {
  SeededRng rng(5);
  const std::vector<int> bins = {3, 5};
  const std::vector<int> dims = {1, 2, 3};
  const auto queries = SampleQueries(bins, dims, 50, rng);
  // dims above the column count are skipped.
  ASSERT_EQ(queries.size(), 100u);
  std::vector<int> mask_counts(8, 0);
  for (size_t i = 0; i < queries.size(); ++i) {
    EXPECT_EQ(queries[i].terms.size(), i < 50 ? 1u : 2u);
    for (const auto& term : queries[i].terms) {
      EXPECT_EQ(static_cast<int>(term.bins.size()), bins[term.column]);
      EXPECT_TRUE(std::any_of(term.bins.begin(), term.bins.end(), [](bool m) { return m; }));
    }
    if (queries[i].terms.size() == 2) {
      EXPECT_NE(queries[i].terms[0].column, queries[i].terms[1].column);
    }
  }
  // Uniform over the 7 non-empty masks of a 3-bin column.
  const std::vector<int> one = {3};
  const std::vector<int> k1 = {1};
  const auto many = SampleQueries(one, k1, 70000, rng);
  for (const auto& q : many) {
    const auto& m = q.terms[0].bins;
    ++mask_counts[m[0] + 2 * m[1] + 4 * m[2]];
  }
  EXPECT_EQ(mask_counts[0], 0);
  for (int m = 1; m < 8; ++m) EXPECT_NEAR(mask_counts[m] / 70000.0, 1.0 / 7, 0.006);
}

TEST(QuerySimilarityTest, IdenticalTablesScoreOne) {
  SeededRng rng(6);
  const Table t = Columns({UniformSample(300, rng), UniformSample(300, rng)});
  const std::vector<BinSpec> specs = {FitUniform(ProvidedDomain(0, 1), 10),
                                      FitUniform(ProvidedDomain(0, 1), 7)};
  EXPECT_DOUBLE_EQ(QuerySimilarity(t, t, specs, rng), 1.0);
}

TEST(CorrelationSimilarityTest, HandComputed) {
  // r = 0 maps to 0.5 and r = -0.5 maps to 0.25.
  const Table train = Columns({{1, 2, 3, 4}, {1, -1, -1, 1}});
  const Table synth = Columns({{1, 2, 3}, {1, -1, 0}});
  EXPECT_NEAR(PearsonMatrix(train)[0][1], 0.0, 1e-12);
  EXPECT_NEAR(PearsonMatrix(synth)[0][1], -0.5, 1e-12);
  const CorrelationScore s = CorrelationSimilarity(train, synth);
  EXPECT_NEAR(s.score, (1 + 1 + 0.5 + 0.5) / 4.0, 1e-12);
  EXPECT_FALSE(s.constant_column);
  EXPECT_DOUBLE_EQ(CorrelationSimilarity(train, train).score, 1.0);
}

TEST(CorrelationSimilarityTest, ConstantColumnIsFlagged) {
  const Table train = Columns({{1, 2, 3}, {5, 5, 5}});
  const CorrelationScore s = CorrelationSimilarity(train, train);
  EXPECT_TRUE(s.constant_column);
  EXPECT_DOUBLE_EQ(s.score, 1.0);
  EXPECT_THROW(CorrelationSimilarity(Columns({{1, 2}}), Columns({{1, 2}})), Error);
}

TEST(PredictiveUtilityTest, Examples) {
  SeededRng rng(7);
  auto labelled = [&](size_t n, double noise) {
    Table t = Columns({UniformSample(n, rng)});
    std::vector<double> y;
    for (double x : t.columns[0].values) y.push_back(x + noise * rng.StandardNormal() > 0.5);
    t.columns.push_back({"y", y, true});
    return t;
  };
  const Table train = labelled(400, 0.05), test = labelled(200, 0.05);
  EXPECT_DOUBLE_EQ(PredictiveUtility(train, train, test, "y"), 1.0);
  const double pu = PredictiveUtility(train, labelled(400, 2.0), test, "y");
  EXPECT_GE(pu, 0.0);
  EXPECT_LE(pu, 1.0);

  Table all_zero = train;
  for (double& y : all_zero.columns[1].values) y = 0.0;
  try {
    PredictiveUtility(all_zero, train, test, "y");
    FAIL() << "expected an undefined-ratio error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefinedRatio);
  }
  Table bad = train;
  bad.columns[1].values[0] = 2.0;
  EXPECT_THROW(PredictiveUtility(bad, train, test, "y"), Error);
}

TEST(MetricReportTest, Aggregate) {
  MetricReport r;
  EXPECT_THROW(r.Aggregate(), Error);
  r.mpd = 0.8;
  r.qs = 0.6;
  EXPECT_DOUBLE_EQ(r.Aggregate(), 0.7);
  EXPECT_EQ(r.count(), 2);
}

}  // namespace
}  // namespace dpdisc
